#pragma once

#include <cstdint>
#include <vector>

#include "spiderlab/rng.hpp"

namespace spiderlab {

// Piecewise-linear function on [0,1] with f(0) = 0, given by strictly
// increasing breakpoints (first 0, last 1) and values there.
struct Polyline {
    std::vector<double> breakpoints;
    std::vector<double> values;

    Polyline() = default;
    Polyline(std::vector<double> xs, std::vector<double> ys);

    double value_at(double x) const;
};

/// The K-peak zigzag extremal: slopes +-1 through the points
/// (j/(2K-1), r_j/(2K-1)) with r_j following the 0,1,0,-1 pattern.
/// |f| has K maxima of height 1/(2K-1) and crosses zero between them.
Polyline zigzag(int peaks);

/// Dirichlet energy sum slope_i^2 * dx_i.
double dirichlet_energy(const Polyline& p);

/// Piecewise-linear interpolation of `f` at the given breakpoints
/// (which must include 0 and 1). Never increases the energy.
Polyline polyline_projection(const Polyline& f, std::vector<double> breakpoints);

// Minimal energy of an alternating piecewise-linear function with K
// peaks of height alpha whose 2K-1 linear sections have total support
// length a: energy alpha^2 * sum 1/x_i subject to sum x_i = a.
struct SegmentQuery {
    int peaks = 1;       // K
    double support = 1.0;  // a in (0,1]
    double peak_height = 1.0;  // alpha
};

struct SegmentSolution {
    std::vector<double> lengths;
    double energy = 0.0;
};

/// Closed form: equal lengths a/(2K-1), energy alpha^2 (2K-1)^2 / a.
SegmentSolution minimize_segments(const SegmentQuery& q);

/// Projected-gradient minimization on the scaled simplex, used to
/// cross-check the closed form.
SegmentSolution minimize_segments_numeric(const SegmentQuery& q);

/// sup-norm distance between the rescaled interpolated path
/// S(xn)/sqrt(2 n ln ln n) and a reference polyline. Requires the
/// signed path S_0..S_n with n >= 16.
double rescaled_path_distance(const std::vector<std::int32_t>& path,
                              const Polyline& reference);

struct Theorem16Row {
    std::int64_t steps = 0;
    double statistic = 0.0;    // min_j M_K(n,j) / sqrt(2 n ln ln n)
    double running_max = 0.0;
    double target = 0.0;       // 1/(2K-1)
};

/// Evolve a single spider walk and report the normalized min-over-legs
/// maximum at each checkpoint (all >= 16), with its running max.
std::vector<Theorem16Row> theorem16_statistic(
    const std::vector<std::int64_t>& checkpoints, std::uint32_t legs,
    Xoshiro256& rng);

}  // namespace spiderlab
