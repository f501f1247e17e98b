#pragma once

#include <cstdint>
#include <vector>

#include "spiderlab/rng.hpp"

namespace spiderlab {

/// Two-sided standard normal tail P(|Z| > z), z >= 0.
/// Absolute error below 1e-12 on [0, 8].
double normal_tail(double z);

/// Same tail evaluated by adaptive quadrature of sqrt(2/pi) * int_z^inf e^{-u^2/2} du.
/// Independent route used to cross-check normal_tail.
double normal_tail_quadrature(double z);

/// Standard normal quantile (inverse CDF).
double normal_quantile(double p);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_ci(std::int64_t successes, std::int64_t trials, double level);

/// Survival function of the Kolmogorov distribution, Q(t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_sf(double t);

/// Critical value c with Q(c) = 1 - level (asymptotic one-sample KS).
double kolmogorov_critical(double level);

struct KsResult {
    double statistic = 0.0;   // sup |F_n - F|
    double scaled = 0.0;      // sqrt(n) * statistic
    double critical = 0.0;
    bool pass = false;
};

/// One-sample KS test of `sample` against the half-normal law (|Z|).
/// Requires at least 50 points so the asymptotic critical value applies.
KsResult ks_against_half_normal(std::vector<double> sample, double level);

// Bernoulli-sum deviation experiment: S_j with j <= bound_horizon summands,
// deviation measured at level bound_horizon * deviation (the padded case
// j < bound_horizon keeps the same bound).
struct BernoulliSumSpec {
    std::int64_t bound_horizon = 0;  // k
    double deviation = 0.0;          // x
    std::int64_t summands = 0;       // j, 0 < j <= k
};

struct HoeffdingResult {
    double empirical = 0.0;
    double bound = 0.0;           // 2 exp(-2 k x^2)
    std::int64_t exceeded = 0;
    std::int64_t replications = 0;
};

/// Empirical P(|S_j - E S_j| >= k x) for iid Bernoulli(p) summands,
/// against the bound 2 exp(-2 k x^2).
HoeffdingResult hoeffding_check(const BernoulliSumSpec& spec, double p,
                                std::int64_t replications, Xoshiro256& rng);

}  // namespace spiderlab
