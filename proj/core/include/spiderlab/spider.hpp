#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "spiderlab/rng.hpp"

namespace spiderlab {

// A vertex of the spider graph: `radius` 0 is the body (leg is then
// canonically 0 so map keys stay unique); radius r >= 1 sits on leg
// `leg` in [1..N].
struct SpiderSite {
    std::uint32_t leg = 0;
    std::uint32_t radius = 0;

    bool is_body() const { return radius == 0; }
    static SpiderSite body() { return {0, 0}; }

    friend bool operator==(SpiderSite a, SpiderSite b) {
        return a.radius == b.radius && (a.radius == 0 || a.leg == b.leg);
    }
};

inline std::uint64_t site_key(SpiderSite s) {
    return (static_cast<std::uint64_t>(s.radius) << 32) |
           (s.radius == 0 ? 0 : s.leg);
}

// Path-level ledger of one realized walk: local times per visited site
// (closed counting convention, visits at steps 0..n inclusive), visits
// to the body, per-leg running maxima and the overall maximum.
struct WalkSummary {
    std::int64_t steps = 0;
    std::unordered_map<std::uint64_t, std::int64_t> local_times;
    std::int64_t zero_count = 0;
    std::vector<std::int64_t> leg_maxima;  // index 0 <-> leg 1
    std::int64_t overall_max = 0;

    std::int64_t local_time(SpiderSite s) const {
        auto it = local_times.find(site_key(s));
        return it == local_times.end() ? 0 : it->second;
    }
};

// Incremental builder shared by the direct simulator and the exact
// enumeration oracles: feed the site occupied at each step 0..n.
class WalkAccumulator {
public:
    explicit WalkAccumulator(std::uint32_t leg_count);
    void visit(SpiderSite s);
    WalkSummary finish();

private:
    WalkSummary summary_;
    std::int64_t visits_ = 0;
};

/// One transition of the walk: uniform over the N legs from the body,
/// fair up/down step on a leg. Throws on leg_count < 1.
SpiderSite step_spider(SpiderSite state, std::uint32_t leg_count, Xoshiro256& rng);

/// Simulate `steps` transitions from the body and summarize the path.
WalkSummary walk_spider(std::uint32_t leg_count, std::int64_t steps, Xoshiro256& rng);

/// Event M(n,R): every leg was visited at height R (equivalently every
/// per-leg maximum is >= R). Throws on height < 1.
bool event_m(const WalkSummary& summary, std::int64_t height);

/// Event A(n,R,k): every leg collected at least `visits` visits at
/// height R. A(.,R,1) coincides with M(.,R).
bool event_a(const WalkSummary& summary, std::int64_t height, std::int64_t visits);

/// min over legs of the per-leg maximum height.
std::int64_t min_leg_max(const WalkSummary& summary);

}  // namespace spiderlab
