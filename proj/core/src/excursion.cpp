#include "spiderlab/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spiderlab/urn.hpp"

namespace spiderlab {

std::int64_t ZeroLedger::zero_count() const {
    // zero_times starts with rho(0)=0, which the open convention excludes
    std::int64_t c = 0;
    for (auto t : zero_times) {
        if (t >= 1 && t < horizon) ++c;
    }
    return c;
}

std::int64_t ZeroLedger::zero_count_closed(std::int64_t t) const {
    std::int64_t c = 0;
    for (auto z : zero_times) {
        if (z >= 1 && z <= t) ++c;
    }
    return c;
}

ReflectedWalk reflected_walk(std::int64_t steps, Xoshiro256& rng,
                             ReflectedWalkOptions opt) {
    if (steps < 0) {
        throw std::invalid_argument("reflected_walk: steps must be >= 0");
    }
    ReflectedWalk walk;
    walk.horizon = steps;
    walk.ledger.horizon = steps;
    walk.ledger.zero_times.push_back(0);
    if (opt.store_path) {
        walk.path.reserve(static_cast<std::size_t>(steps) + 1);
        walk.path.push_back(0);
    }

    std::int64_t v = 0;
    std::int64_t k = 0;
    ExcursionRecord cur;
    bool in_excursion = false;

    auto close_excursion = [&](std::int64_t end) {
        cur.length = end - cur.start;
        walk.excursions.push_back(cur);
        in_excursion = false;
    };

    while (k < steps) {
        if (v == 0) {
            cur = ExcursionRecord{};
            cur.start = k;
            in_excursion = true;
            v = 1;  // from zero the reflected walk moves to 1 surely
        } else {
            v += rng.next_bit() ? 1 : -1;
        }
        ++k;
        if (opt.store_path) walk.path.push_back(static_cast<std::int32_t>(v));
        if (in_excursion) {
            cur.max_height = std::max(cur.max_height, v);
            cur.max_height_by_horizon = cur.max_height;
        }
        if (v == 0) {
            walk.ledger.zero_times.push_back(k);
            close_excursion(k);
        }
    }

    if (v == 0) {
        walk.ledger.completion_time = k;
    } else if (opt.extend_to_completion && !opt.store_path) {
        // resolve the open excursion without stepping to H(n), whose
        // expected distance is infinite: from height h the eventual
        // maximum M obeys P(M >= m) = h/m for m >= h, so inversion from
        // one uniform gives it exactly
        double u = rng.next_double();
        while (u == 0.0) u = rng.next_double();
        const double draw = std::floor(static_cast<double>(v) / u);
        const auto m = static_cast<std::int64_t>(
            std::min(draw, 4.611686018427387904e18));
        cur.max_height = std::max(cur.max_height, m);
        walk.ledger.completion_time = -1;  // time itself not simulated
        cur.length = -1;
        walk.excursions.push_back(cur);
        in_excursion = false;
    } else if (opt.extend_to_completion) {
        // with a stored path the extension has to be stepped out
        while (v != 0) {
            v += rng.next_bit() ? 1 : -1;
            ++k;
            walk.path.push_back(static_cast<std::int32_t>(v));
            cur.max_height = std::max(cur.max_height, v);
        }
        walk.ledger.zero_times.push_back(k);
        walk.ledger.completion_time = k;
        close_excursion(k);
    } else {
        walk.ledger.completion_time = -1;  // unknown without extension
        walk.excursions.push_back(cur);    // incomplete record
    }
    return walk;
}

std::vector<ExcursionRecord> decompose_excursions(const std::vector<std::int32_t>& path) {
    std::vector<ExcursionRecord> records;
    if (path.empty()) return records;
    if (path[0] != 0) {
        throw std::invalid_argument("decompose_excursions: path must start at 0");
    }
    ExcursionRecord cur;
    bool open = false;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const std::int64_t v = path[k];
        if (!open) {
            cur = ExcursionRecord{};
            cur.start = static_cast<std::int64_t>(k) - 1;
            open = true;
        }
        cur.max_height = std::max(cur.max_height, v);
        cur.max_height_by_horizon = cur.max_height;
        if (v == 0) {
            cur.length = static_cast<std::int64_t>(k) - cur.start;
            records.push_back(cur);
            open = false;
        }
    }
    if (open) records.push_back(cur);  // incomplete, length stays -1
    return records;
}

std::int64_t tall_count(const ReflectedWalk& walk, std::int64_t height,
                        Tallness mode) {
    if (height < 1) throw std::invalid_argument("tall_count: height must be >= 1");
    std::int64_t c = 0;
    for (const auto& rec : walk.excursions) {
        if (rec.start < 1 || rec.start >= walk.horizon) continue;
        const std::int64_t h =
            mode == Tallness::Full ? rec.max_height : rec.max_height_by_horizon;
        if (h >= height) ++c;
    }
    return c;
}

std::int64_t tall_reached_by_horizon(const ReflectedWalk& walk, std::int64_t height) {
    if (height < 1) {
        throw std::invalid_argument("tall_reached_by_horizon: height must be >= 1");
    }
    std::int64_t c = 0;
    for (const auto& rec : walk.excursions) {
        if (rec.start >= walk.horizon) continue;
        if (rec.max_height_by_horizon >= height) ++c;
    }
    return c;
}

std::int64_t sample_excursion_max(Xoshiro256& rng) {
    double u = rng.next_double();
    while (u == 0.0) u = rng.next_double();
    const double m = std::floor(1.0 / u);
    if (m < 1.0) return 1;
    if (m > 9.0e18) return 9000000000000000000LL;
    return static_cast<std::int64_t>(m);
}

void assign_legs(std::vector<ExcursionRecord>& records, std::uint32_t legs,
                 Xoshiro256& rng) {
    if (legs < 1) throw std::invalid_argument("assign_legs: legs must be >= 1");
    for (auto& rec : records) {
        rec.leg = static_cast<std::uint32_t>(rng.next_below(legs)) + 1;
    }
}

WalkSummary summarize_assigned(const std::vector<std::int32_t>& path,
                               std::int64_t steps,
                               const std::vector<ExcursionRecord>& records,
                               std::uint32_t legs) {
    if (static_cast<std::int64_t>(path.size()) < steps + 1) {
        throw std::invalid_argument("summarize_assigned: path shorter than horizon");
    }
    WalkAccumulator acc(legs);
    std::size_t rec_idx = 0;
    for (std::int64_t k = 0; k <= steps; ++k) {
        const std::int64_t v = path[static_cast<std::size_t>(k)];
        if (v == 0) {
            acc.visit(SpiderSite::body());
            continue;
        }
        while (rec_idx + 1 < records.size() && records[rec_idx + 1].start < k) {
            ++rec_idx;
        }
        const auto& rec = records[rec_idx];
        if (rec.leg < 1) {
            throw std::invalid_argument("summarize_assigned: unassigned excursion");
        }
        acc.visit({rec.leg, static_cast<std::uint32_t>(v)});
    }
    return acc.finish();
}

WalkSummary walk_via_excursions(std::uint32_t legs, std::int64_t steps,
                                Xoshiro256& rng) {
    if (legs < 1) throw std::invalid_argument("walk_via_excursions: legs must be >= 1");
    ReflectedWalkOptions opt;
    opt.extend_to_completion = false;
    opt.store_path = true;
    ReflectedWalk walk = reflected_walk(steps, rng, opt);
    assign_legs(walk.excursions, legs, rng);
    return summarize_assigned(walk.path, steps, walk.excursions, legs);
}

double rao_blackwell_coverage(std::int64_t tall, std::uint32_t urns,
                              std::int64_t threshold) {
    if (tall < 0) throw std::invalid_argument("rao_blackwell_coverage: tall must be >= 0");
    return coverage_prob_at_least_k(urns, tall, threshold);
}

}  // namespace spiderlab
