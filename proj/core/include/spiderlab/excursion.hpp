#pragma once

#include <cstdint>
#include <vector>

#include "spiderlab/rng.hpp"
#include "spiderlab/spider.hpp"

namespace spiderlab {

// One excursion of the reflected walk |S|: starts at a zero, ends at
// the next zero. `length` is -1 while the excursion is incomplete.
// `max_height` is the maximum over the simulated span (through
// completion when the walk was extended); `max_height_by_horizon`
// restricts the maximum to steps <= n.
struct ExcursionRecord {
    std::int64_t start = 0;
    std::int64_t length = -1;
    std::int64_t max_height = 0;
    std::int64_t max_height_by_horizon = 0;
    std::uint32_t leg = 0;  // 0 = not yet assigned

    bool complete() const { return length >= 0; }
};

// Zeros of the reflected walk. zero_times holds rho(0)=0 < rho(1) < ...
// through the simulated span; completion_time is H(n), the zero closing
// the excursion running at the horizon.
struct ZeroLedger {
    std::vector<std::int64_t> zero_times;
    std::int64_t horizon = 0;
    std::int64_t completion_time = 0;

    // xi(0,n) with the open convention #{1 <= k < n : S_k = 0}
    std::int64_t zero_count() const;
    // #{1 <= k <= t : S_k = 0}; the closed variant used at stopping times
    std::int64_t zero_count_closed(std::int64_t t) const;
    // zeta(1,n): every excursion is at least 1 tall, so this is zero_count()
    std::int64_t excursion_starts() const { return zero_count(); }
};

struct ReflectedWalk {
    std::int64_t horizon = 0;
    std::vector<std::int32_t> path;  // |S_0..S_T| when stored, else empty
    ZeroLedger ledger;
    std::vector<ExcursionRecord> excursions;
};

struct ReflectedWalkOptions {
    bool extend_to_completion = true;  // resolve the running excursion's full maximum
    bool store_path = false;
};

/// Simulate the reflected walk |S| for `steps` steps, recording zeros
/// and per-excursion maxima. With extension on, the excursion still
/// open at n gets its eventual maximum drawn exactly by inversion
/// (P(M >= m | height h) = h/m), since stepping to H(n) has infinite
/// expected cost; its length stays -1 and completion_time is -1 unless
/// the path is stored, in which case the extension is stepped out.
ReflectedWalk reflected_walk(std::int64_t steps, Xoshiro256& rng,
                             ReflectedWalkOptions opt = {});

/// Zero-to-zero decomposition of a stored reflected path. A trailing
/// segment that never returns to zero yields an incomplete record.
std::vector<ExcursionRecord> decompose_excursions(const std::vector<std::int32_t>& path);

// zeta(L,n) conventions: Full judges tallness over the whole excursion
// (possibly past n, which needs an extended walk); ByHorizon only
// counts heights reached by step n. The two counts differ by at most
// one excursion, the one running at the horizon.
enum class Tallness { Full, ByHorizon };

/// zeta(L,n): excursions started at zeros k in [1,n) that reach `height`.
std::int64_t tall_count(const ReflectedWalk& walk, std::int64_t height,
                        Tallness mode = Tallness::Full);

/// Excursions (including the one started at time 0 and the running one)
/// whose maximum by step n is >= height. This is the count conditioning
/// the Rao-Blackwell estimator of M(n,L).
std::int64_t tall_reached_by_horizon(const ReflectedWalk& walk, std::int64_t height);

/// Exact sample of an excursion's maximum: P(max >= m) = 1/m, by
/// inversion from a single uniform (m = floor(1/U)).
std::int64_t sample_excursion_max(Xoshiro256& rng);

/// Independently assign each excursion a uniform leg in [1..legs].
void assign_legs(std::vector<ExcursionRecord>& records, std::uint32_t legs,
                 Xoshiro256& rng);

/// Deterministic rebuild of a spider-walk summary from a reflected path
/// and leg-assigned excursions, truncated at `steps`. Shared with the
/// exact enumeration oracle.
WalkSummary summarize_assigned(const std::vector<std::int32_t>& path,
                               std::int64_t steps,
                               const std::vector<ExcursionRecord>& records,
                               std::uint32_t legs);

/// Spider walk built by the excursions-into-urns coupling; equal in law
/// to walk_spider.
WalkSummary walk_via_excursions(std::uint32_t legs, std::int64_t steps,
                                Xoshiro256& rng);

/// Exact P(every one of `urns` urns gets >= threshold of `tall` uniform
/// balls): the conditional expectation replacing the event indicator.
double rao_blackwell_coverage(std::int64_t tall, std::uint32_t urns,
                              std::int64_t threshold);

}  // namespace spiderlab
