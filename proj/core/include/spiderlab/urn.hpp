#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spiderlab/rng.hpp"

namespace spiderlab {

struct OccupancyQuery {
    std::int64_t urns = 1;       // N
    std::int64_t balls = 0;      // G
    std::int64_t threshold = 1;  // k
};

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// P(every one of N urns receives at least one of G uniform balls).
/// Inclusion-exclusion sum_{j} (-1)^j C(N,j) (1-j/N)^G evaluated in the
/// log domain with compensated accumulation; clamped to [0,1].
double coverage_prob_exact(std::int64_t urns, std::int64_t balls);

/// P(every urn receives at least `threshold` balls). Exact: the
/// truncated-exponential generating-function DP for small instances,
/// otherwise inclusion-exclusion over deficient urns with certified
/// truncation (alternating partial sums bracket the value).
double coverage_prob_at_least_k(std::int64_t urns, std::int64_t balls,
                                std::int64_t threshold);

/// The O(urns * balls^2) generating-function dynamic program,
/// G![x^G](sum_{i>=k} x^i/i!)^N / N^G, in the log domain. Throws
/// ResourceError beyond `budget` table cells.
double coverage_prob_at_least_k_dp(std::int64_t urns, std::int64_t balls,
                                   std::int64_t threshold,
                                   std::int64_t budget = 200000000);

/// Inclusion-exclusion route over deficient urns, exact up to a
/// certified truncation bound. Second algebraic route used to
/// cross-check the DP.
double coverage_prob_at_least_k_ie(std::int64_t urns, std::int64_t balls,
                                   std::int64_t threshold);

/// Erdos-Renyi limit exp(-exp(-x)/(m-1)!); m = 1 is the classical
/// double-exponential coverage limit.
double er_limit(double x, std::int64_t m);

/// Multinomial occupancy of `balls` uniform balls in `urns` urns.
std::vector<std::int64_t> throw_balls(std::int64_t urns, std::int64_t balls,
                                      Xoshiro256& rng);

}  // namespace spiderlab
