#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spiderlab/rng.hpp"
#include "spiderlab/urn.hpp"

namespace spiderlab {

enum class Engine { Naive, Excursion, RaoBlackwell };

const char* engine_name(Engine e);
Engine engine_from_name(const std::string& name);

// One experiment family: N legs, target height L, scale constant c (or
// a named f-schedule), visit threshold k, replication budget.
struct ExperimentConfig {
    std::uint32_t legs = 2;            // N
    std::int64_t height = 1;           // L
    double scale = 1.0;                // c
    std::string schedule;              // "", "log-log", "inv-log-log"
    std::int64_t visit_threshold = 1;  // k
    std::int64_t replications = 1000;
    std::uint64_t seed = 1;
    Engine engine = Engine::RaoBlackwell;
    int workers = 0;                   // 0 = hardware concurrency
    double step_budget = 1e11;         // refuse configs above this many total steps
};

// Diagnostic split of replications by where the tall-excursion count
// landed relative to (1 -+ 2 eps) mu.
struct RegimeCounters {
    std::int64_t below = 0;
    std::int64_t mid = 0;
    std::int64_t above = 0;
};

struct EstimateWithCI {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t replications = 0;
    double target = 0.0;
    Engine engine = Engine::RaoBlackwell;
    std::int64_t steps = 0;
    bool in_regime = true;
    RegimeCounters counters;
};

/// Step count ceil((c * L * N * ln N)^2); requires N >= 2.
std::int64_t n_steps(std::uint32_t legs, std::int64_t height, double scale);

/// The limit probability p(c) = P(|Z| > 1/c).
double p_of_c(double scale);

struct RegimeReport {
    bool in_regime = false;   // L <= N / ln N
    double margin = 0.0;      // eps*mu - 4 n^{1/4} (ln n)^{3/4}
};

RegimeReport check_regime(std::uint32_t legs, std::int64_t height,
                          double epsilon = 0.1, double scale = 1.0);

/// Monte Carlo estimate of P(M(n,L)) (or P(A(n,L,k)) for k > 1) at
/// n = n_steps(N, L, c), with Wilson CI for the indicator engines and a
/// normal CI for the Rao-Blackwell engine.
EstimateWithCI estimate_limit_probability(const ExperimentConfig& config);

/// Same, at several coupled scales: each replication extends one path
/// through all the checkpoints, so estimates are pathwise monotone in c.
std::vector<EstimateWithCI> estimate_at_scales(const ExperimentConfig& config,
                                               std::vector<double> scales);

/// Value of the named schedule at N ("log-log" = ln ln N,
/// "inv-log-log" = 1 / ln ln N); empty means the constant config.scale.
double schedule_value(const std::string& schedule, std::uint32_t legs);

struct SweepRow {
    std::uint32_t legs = 0;
    double f_value = 0.0;
    EstimateWithCI estimate;
    std::string warning;  // non-empty when the step scale fails to diverge
};

/// Estimates of P(M((f(N) L N ln N)^2, L)) over a grid of N.
std::vector<SweepRow> sweep_f_schedule(const ExperimentConfig& config,
                                       const std::vector<std::uint32_t>& leg_grid);

struct Lemma32Report {
    std::int64_t steps = 0;
    std::int64_t height = 0;
    std::int64_t violations = 0;
    std::int64_t replications = 0;
    double frequency = 0.0;
    double threshold = 0.0;  // 4 n^{1/4} (ln n)^{3/4}
    double bound = 0.0;      // 2/n
};

/// Empirical frequency of |zeta(L,n) - xi(0,n)/L| >= 4 n^{1/4}(ln n)^{3/4}.
Lemma32Report verify_lemma32(std::int64_t steps, std::int64_t height,
                             std::int64_t replications, std::uint64_t seed);

struct ChungSample {
    std::int64_t replication = 0;
    std::int64_t steps = 0;
    double statistic = 0.0;    // sqrt(ln ln n / n) * max |S|
    double running_min = 0.0;  // per-path minimum over the grid so far
};

/// Samples of the normalized running maximum along a step grid, for
/// trend inspection against the liminf constant pi/sqrt(8).
std::vector<ChungSample> chung_statistic(const std::vector<std::int64_t>& step_grid,
                                         std::int64_t replications,
                                         std::uint64_t seed);

/// The liminf constant pi/sqrt(8).
double chung_constant();

}  // namespace spiderlab
