#include "spiderlab/limit_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "spiderlab/excursion.hpp"
#include "spiderlab/stats.hpp"

namespace spiderlab {

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::Naive: return "naive";
        case Engine::Excursion: return "excursion";
        case Engine::RaoBlackwell: return "rao-blackwell";
    }
    return "?";
}

Engine engine_from_name(const std::string& name) {
    if (name == "naive") return Engine::Naive;
    if (name == "excursion") return Engine::Excursion;
    if (name == "rao-blackwell" || name == "rb") return Engine::RaoBlackwell;
    throw std::invalid_argument("unknown engine: " + name);
}

std::int64_t n_steps(std::uint32_t legs, std::int64_t height, double scale) {
    if (legs < 2) throw std::invalid_argument("n_steps: need at least 2 legs");
    if (height < 1) throw std::invalid_argument("n_steps: height must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("n_steps: scale must be > 0");
    const double root = scale * static_cast<double>(height) *
                        static_cast<double>(legs) * std::log(static_cast<double>(legs));
    const double n = std::ceil(root * root);
    if (n > 9.0e18) throw std::invalid_argument("n_steps: step count overflows");
    return static_cast<std::int64_t>(n);
}

double p_of_c(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("p_of_c: scale must be > 0");
    return normal_tail(1.0 / scale);
}

RegimeReport check_regime(std::uint32_t legs, std::int64_t height, double epsilon,
                          double scale) {
    if (legs < 2) throw std::invalid_argument("check_regime: need at least 2 legs");
    RegimeReport r;
    const double lnN = std::log(static_cast<double>(legs));
    r.in_regime = static_cast<double>(height) <= static_cast<double>(legs) / lnN;
    const double n = static_cast<double>(n_steps(legs, height, scale));
    const double mu = static_cast<double>(legs) * lnN;
    r.margin = epsilon * mu -
               4.0 * std::pow(n, 0.25) * std::pow(std::log(n), 0.75);
    return r;
}

namespace {

// One replication of the direct spider simulation. Counts visits at
// height L per leg; `satisfied_at` is the first step at which every leg
// has >= k of them (the events are monotone in n, so the loop can stop
// there).
std::int64_t rep_spider_naive(std::uint32_t legs, std::int64_t height,
                              std::int64_t threshold, std::int64_t n_max,
                              Xoshiro256 rng) {
    std::vector<std::int64_t> visits(legs, 0);
    std::int64_t satisfied = 0;
    std::int64_t v = 0;
    std::uint32_t leg = 0;
    std::uint64_t block = 0;
    int nb = 0;
    for (std::int64_t step = 1; step <= n_max; ++step) {
        if (v == 0) {
            leg = static_cast<std::uint32_t>(rng.next_below(legs));
            v = 1;
        } else {
            if (nb == 0) {
                block = rng.next_u64();
                nb = 64;
            }
            v += (block & 1) ? 1 : -1;
            block >>= 1;
            --nb;
        }
        if (v == height) {
            if (++visits[leg] == threshold && ++satisfied ==
                                                  static_cast<std::int64_t>(legs)) {
                return step;
            }
        }
    }
    return -1;
}

// One replication of the reflected-walk engines. Records the
// tall-excursion count G (excursions whose maximum reached L by the
// checkpoint) at every checkpoint; when `with_legs` is set it also
// plays the urn assignment per excursion and reports the first step at
// which every leg has >= k visits at height L.
void rep_reflected(std::uint32_t legs, std::int64_t height, std::int64_t threshold,
                   const std::vector<std::int64_t>& checkpoints, bool with_legs,
                   Xoshiro256 rng, std::int64_t* tall_out,
                   std::int64_t* satisfied_at_out) {
    std::vector<std::int64_t> visits(with_legs ? legs : 0, 0);
    std::int64_t satisfied = 0;
    std::int64_t satisfied_at = -1;
    std::int64_t v = 0;
    std::uint32_t leg = 0;
    bool reached = false;
    std::int64_t tall = 0;
    std::size_t ci = 0;
    const std::int64_t n_max = checkpoints.back();
    std::uint64_t block = 0;
    int nb = 0;
    for (std::int64_t step = 1; step <= n_max; ++step) {
        if (v == 0) {
            reached = false;
            v = 1;
            if (with_legs) leg = static_cast<std::uint32_t>(rng.next_below(legs));
        } else {
            if (nb == 0) {
                block = rng.next_u64();
                nb = 64;
            }
            v += (block & 1) ? 1 : -1;
            block >>= 1;
            --nb;
        }
        if (v == height) {
            if (!reached) {
                reached = true;
                ++tall;
            }
            if (with_legs && satisfied_at < 0) {
                if (++visits[leg] == threshold &&
                    ++satisfied == static_cast<std::int64_t>(legs)) {
                    satisfied_at = step;
                }
            }
        }
        while (ci < checkpoints.size() && step == checkpoints[ci]) {
            tall_out[ci] = tall;
            ++ci;
        }
    }
    if (satisfied_at_out) *satisfied_at_out = satisfied_at;
}

void parallel_reps(std::int64_t replications, int workers,
                   const std::function<void(std::int64_t)>& body) {
    int w = workers > 0 ? workers
                        : static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    if (w == 1) {
        for (std::int64_t r = 0; r < replications; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::int64_t r = t; r < replications; r += w) body(r);
        });
    }
    for (auto& th : pool) th.join();
}

EstimateWithCI summarize_indicators(const std::vector<double>& values,
                                    Engine engine, double target,
                                    std::int64_t steps) {
    EstimateWithCI est;
    est.engine = engine;
    est.target = target;
    est.steps = steps;
    est.replications = static_cast<std::int64_t>(values.size());
    std::int64_t successes = 0;
    for (double v : values) successes += (v >= 0.5) ? 1 : 0;
    est.point = static_cast<double>(successes) / static_cast<double>(values.size());
    const Interval ci = wilson_ci(successes, est.replications, 0.95);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

EstimateWithCI summarize_means(const std::vector<double>& values, Engine engine,
                               double target, std::int64_t steps) {
    EstimateWithCI est;
    est.engine = engine;
    est.target = target;
    est.steps = steps;
    est.replications = static_cast<std::int64_t>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= std::max<double>(1.0, static_cast<double>(values.size() - 1));
    const double half = 1.959963984540054 *
                        std::sqrt(var / static_cast<double>(values.size()));
    est.point = mean;
    est.ci_low = std::max(0.0, mean - half);
    est.ci_high = std::min(1.0, mean + half);
    return est;
}

void fill_counters(const std::vector<std::int64_t>& tall, std::uint32_t legs,
                   double epsilon, RegimeCounters* out) {
    const double mu = static_cast<double>(legs) * std::log(static_cast<double>(legs));
    for (auto g : tall) {
        const double z = static_cast<double>(g);
        if (z <= (1.0 - 2.0 * epsilon) * mu) {
            ++out->below;
        } else if (z >= (1.0 + 2.0 * epsilon) * mu) {
            ++out->above;
        } else {
            ++out->mid;
        }
    }
}

}  // namespace

std::vector<EstimateWithCI> estimate_at_scales(const ExperimentConfig& config,
                                               std::vector<double> scales) {
    if (scales.empty()) throw std::invalid_argument("estimate_at_scales: no scales");
    if (config.replications < 1) {
        throw std::invalid_argument("estimate_at_scales: replications must be >= 1");
    }
    if (config.visit_threshold < 1) {
        throw std::invalid_argument("estimate_at_scales: visit threshold must be >= 1");
    }
    std::sort(scales.begin(), scales.end());
    std::vector<std::int64_t> checkpoints;
    checkpoints.reserve(scales.size());
    for (double c : scales) {
        checkpoints.push_back(n_steps(config.legs, config.height, c));
    }
    const double total_steps = static_cast<double>(checkpoints.back()) *
                               static_cast<double>(config.replications);
    if (total_steps > config.step_budget) {
        throw ResourceError("estimate_at_scales: configuration implies " +
                            std::to_string(total_steps) + " steps, budget is " +
                            std::to_string(config.step_budget));
    }

    const std::size_t reps = static_cast<std::size_t>(config.replications);
    const std::size_t nc = checkpoints.size();
    const RngStream master{config.seed, 0x5105ULL};

    std::vector<std::int64_t> tall(reps * nc, 0);
    std::vector<std::int64_t> satisfied_at(reps, -1);

    switch (config.engine) {
        case Engine::Naive:
            parallel_reps(config.replications, config.workers, [&](std::int64_t r) {
                satisfied_at[static_cast<std::size_t>(r)] = rep_spider_naive(
                    config.legs, config.height, config.visit_threshold,
                    checkpoints.back(),
                    split_stream(master, static_cast<std::uint64_t>(r)));
            });
            break;
        case Engine::Excursion:
        case Engine::RaoBlackwell: {
            const bool with_legs = config.engine == Engine::Excursion;
            parallel_reps(config.replications, config.workers, [&](std::int64_t r) {
                rep_reflected(config.legs, config.height, config.visit_threshold,
                              checkpoints, with_legs,
                              split_stream(master, static_cast<std::uint64_t>(r)),
                              &tall[static_cast<std::size_t>(r) * nc],
                              &satisfied_at[static_cast<std::size_t>(r)]);
            });
            break;
        }
    }

    std::vector<EstimateWithCI> out;
    out.reserve(nc);
    std::unordered_map<std::int64_t, double> coverage_cache;
    for (std::size_t i = 0; i < nc; ++i) {
        std::vector<double> values(reps, 0.0);
        if (config.engine == Engine::RaoBlackwell) {
            for (std::size_t r = 0; r < reps; ++r) {
                const std::int64_t g = tall[r * nc + i];
                auto it = coverage_cache.find(g);
                if (it == coverage_cache.end()) {
                    it = coverage_cache
                             .emplace(g, rao_blackwell_coverage(g, config.legs,
                                                                config.visit_threshold))
                             .first;
                }
                values[r] = it->second;
            }
        } else {
            for (std::size_t r = 0; r < reps; ++r) {
                values[r] = (satisfied_at[r] >= 0 && satisfied_at[r] <= checkpoints[i])
                                ? 1.0
                                : 0.0;
            }
        }
        EstimateWithCI est =
            config.engine == Engine::RaoBlackwell
                ? summarize_means(values, config.engine, p_of_c(scales[i]),
                                  checkpoints[i])
                : summarize_indicators(values, config.engine, p_of_c(scales[i]),
                                       checkpoints[i]);
        est.in_regime = check_regime(config.legs, config.height).in_regime;
        if (config.engine != Engine::Naive) {
            std::vector<std::int64_t> column(reps);
            for (std::size_t r = 0; r < reps; ++r) column[r] = tall[r * nc + i];
            fill_counters(column, config.legs, 0.1, &est.counters);
        }
        out.push_back(est);
    }
    return out;
}

EstimateWithCI estimate_limit_probability(const ExperimentConfig& config) {
    return estimate_at_scales(config, {config.scale}).front();
}

double schedule_value(const std::string& schedule, std::uint32_t legs) {
    if (legs < 3) throw std::invalid_argument("schedule_value: need legs >= 3");
    const double ll = std::log(std::log(static_cast<double>(legs)));
    if (schedule == "log-log") return ll;
    if (schedule == "inv-log-log") return 1.0 / ll;
    throw std::invalid_argument("schedule_value: unknown schedule '" + schedule + "'");
}

std::vector<SweepRow> sweep_f_schedule(const ExperimentConfig& config,
                                       const std::vector<std::uint32_t>& leg_grid) {
    if (leg_grid.empty()) throw std::invalid_argument("sweep_f_schedule: empty grid");
    std::vector<SweepRow> rows;
    double prev_root = -1.0;
    for (std::uint32_t legs : leg_grid) {
        SweepRow row;
        row.legs = legs;
        row.f_value = config.schedule.empty() ? config.scale
                                              : schedule_value(config.schedule, legs);
        ExperimentConfig point = config;
        point.legs = legs;
        point.scale = row.f_value;
        point.schedule.clear();
        row.estimate = estimate_limit_probability(point);
        row.estimate.target = config.schedule == "log-log" ? 1.0
                              : config.schedule == "inv-log-log"
                                  ? 0.0
                                  : p_of_c(config.scale);
        const double root = row.f_value * static_cast<double>(config.height) *
                            static_cast<double>(legs) *
                            std::log(static_cast<double>(legs));
        if (root <= prev_root) {
            row.warning = "step scale f(N) L N ln N is not diverging along the grid";
        }
        prev_root = root;
        rows.push_back(std::move(row));
    }
    return rows;
}

Lemma32Report verify_lemma32(std::int64_t steps, std::int64_t height,
                             std::int64_t replications, std::uint64_t seed) {
    if (steps < 16) throw std::invalid_argument("verify_lemma32: steps must be >= 16");
    if (height < 1) throw std::invalid_argument("verify_lemma32: height must be >= 1");
    Lemma32Report rep;
    rep.steps = steps;
    rep.height = height;
    rep.replications = replications;
    const double n = static_cast<double>(steps);
    rep.threshold = 4.0 * std::pow(n, 0.25) * std::pow(std::log(n), 0.75);
    rep.bound = 2.0 / n;
    const RngStream master{seed, 0x332ULL};
    for (std::int64_t r = 0; r < replications; ++r) {
        auto rng = split_stream(master, static_cast<std::uint64_t>(r));
        const ReflectedWalk walk = reflected_walk(steps, rng);
        const double zeta =
            static_cast<double>(tall_count(walk, height, Tallness::Full));
        const double xi = static_cast<double>(walk.ledger.zero_count());
        if (std::abs(zeta - xi / static_cast<double>(height)) >= rep.threshold) {
            ++rep.violations;
        }
    }
    rep.frequency = replications > 0 ? static_cast<double>(rep.violations) /
                                           static_cast<double>(replications)
                                     : 0.0;
    return rep;
}

double chung_constant() { return M_PI / std::sqrt(8.0); }

std::vector<ChungSample> chung_statistic(const std::vector<std::int64_t>& step_grid,
                                         std::int64_t replications,
                                         std::uint64_t seed) {
    if (step_grid.empty()) throw std::invalid_argument("chung_statistic: empty grid");
    for (auto n : step_grid) {
        if (n < 16) throw std::invalid_argument("chung_statistic: grid entries must be >= 16");
    }
    std::vector<std::int64_t> grid = step_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<ChungSample> samples;
    samples.reserve(static_cast<std::size_t>(replications) * grid.size());
    const RngStream master{seed, 0xC4A6ULL};
    for (std::int64_t r = 0; r < replications; ++r) {
        auto rng = split_stream(master, static_cast<std::uint64_t>(r));
        std::int64_t v = 0;
        std::int64_t max_abs = 0;
        std::size_t gi = 0;
        double running_min = std::numeric_limits<double>::infinity();
        std::uint64_t block = 0;
        int nb = 0;
        for (std::int64_t step = 1; step <= grid.back(); ++step) {
            if (nb == 0) {
                block = rng.next_u64();
                nb = 64;
            }
            v += (block & 1) ? 1 : -1;
            block >>= 1;
            --nb;
            max_abs = std::max(max_abs, std::abs(v));
            while (gi < grid.size() && step == grid[gi]) {
                const double n = static_cast<double>(grid[gi]);
                const double stat = std::sqrt(std::log(std::log(n)) / n) *
                                    static_cast<double>(max_abs);
                running_min = std::min(running_min, stat);
                samples.push_back({r, grid[gi], stat, running_min});
                ++gi;
            }
        }
    }
    return samples;
}

}  // namespace spiderlab
