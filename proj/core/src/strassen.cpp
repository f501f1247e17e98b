#include "spiderlab/strassen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spiderlab {

Polyline::Polyline(std::vector<double> xs, std::vector<double> ys)
    : breakpoints(std::move(xs)), values(std::move(ys)) {
    if (breakpoints.size() != values.size() || breakpoints.size() < 2) {
        throw std::invalid_argument("Polyline: need matching xs/ys, at least 2 points");
    }
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
        throw std::invalid_argument("Polyline: breakpoints must start at 0 and end at 1");
    }
    if (values.front() != 0.0) {
        throw std::invalid_argument("Polyline: f(0) must be 0");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > breakpoints[i - 1])) {
            throw std::invalid_argument("Polyline: breakpoints must be strictly increasing");
        }
    }
}

double Polyline::value_at(double x) const {
    if (x <= 0.0) return values.front();
    if (x >= 1.0) return values.back();
    const auto it =
        std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - breakpoints.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - breakpoints[lo]) / (breakpoints[hi] - breakpoints[lo]);
    return values[lo] + t * (values[hi] - values[lo]);
}

Polyline zigzag(int peaks) {
    if (peaks < 1) throw std::invalid_argument("zigzag: peaks must be >= 1");
    const int segments = 2 * peaks - 1;
    std::vector<double> xs(static_cast<std::size_t>(segments) + 1);
    std::vector<double> ys(static_cast<std::size_t>(segments) + 1);
    for (int j = 0; j <= segments; ++j) {
        xs[static_cast<std::size_t>(j)] =
            static_cast<double>(j) / static_cast<double>(segments);
        // r_j = sin(j pi / 2) takes the exact pattern 0, 1, 0, -1
        int r = 0;
        switch (j % 4) {
            case 1: r = 1; break;
            case 3: r = -1; break;
            default: r = 0; break;
        }
        ys[static_cast<std::size_t>(j)] =
            static_cast<double>(r) / static_cast<double>(segments);
    }
    xs.back() = 1.0;
    return Polyline(std::move(xs), std::move(ys));
}

double dirichlet_energy(const Polyline& p) {
    double e = 0.0;
    for (std::size_t i = 1; i < p.breakpoints.size(); ++i) {
        const double dx = p.breakpoints[i] - p.breakpoints[i - 1];
        if (dx <= 0.0) throw std::invalid_argument("dirichlet_energy: zero-length segment");
        const double dy = p.values[i] - p.values[i - 1];
        e += dy * dy / dx;
    }
    return e;
}

Polyline polyline_projection(const Polyline& f, std::vector<double> breakpoints) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
    if (breakpoints.empty() || breakpoints.front() != 0.0 ||
        breakpoints.back() != 1.0) {
        throw std::invalid_argument("polyline_projection: breakpoints must include 0 and 1");
    }
    std::vector<double> ys;
    ys.reserve(breakpoints.size());
    for (double x : breakpoints) ys.push_back(f.value_at(x));
    return Polyline(std::move(breakpoints), std::move(ys));
}

SegmentSolution minimize_segments(const SegmentQuery& q) {
    if (q.peaks < 1 || !(q.support > 0.0 && q.support <= 1.0) ||
        !(q.peak_height > 0.0)) {
        throw std::invalid_argument("minimize_segments: invalid query");
    }
    const int m = 2 * q.peaks - 1;
    SegmentSolution sol;
    sol.lengths.assign(static_cast<std::size_t>(m),
                       q.support / static_cast<double>(m));
    sol.energy = q.peak_height * q.peak_height * static_cast<double>(m) *
                 static_cast<double>(m) / q.support;
    return sol;
}

namespace {

// Euclidean projection onto {x : sum x = a, x >= floor}
void project_simplex(std::vector<double>& x, double a, double floor_val) {
    const std::size_t m = x.size();
    std::vector<double> shifted(m);
    for (std::size_t i = 0; i < m; ++i) shifted[i] = x[i] - floor_val;
    const double budget = a - floor_val * static_cast<double>(m);
    std::vector<double> sorted = shifted;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cum = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        cum += sorted[i];
        const double cand = (cum - budget) / static_cast<double>(i + 1);
        if (i + 1 == m || sorted[i + 1] <= cand) {
            theta = cand;
            break;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = std::max(0.0, shifted[i] - theta) + floor_val;
    }
}

}  // namespace

SegmentSolution minimize_segments_numeric(const SegmentQuery& q) {
    if (q.peaks < 1 || !(q.support > 0.0 && q.support <= 1.0) ||
        !(q.peak_height > 0.0)) {
        throw std::invalid_argument("minimize_segments_numeric: invalid query");
    }
    const int m = 2 * q.peaks - 1;
    const double a = q.support;
    const double alpha2 = q.peak_height * q.peak_height;
    const double floor_val = 1e-6 * a / static_cast<double>(m);

    // deliberately asymmetric start
    std::vector<double> x(static_cast<std::size_t>(m));
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        x[static_cast<std::size_t>(i)] = 1.0 + 0.5 * static_cast<double>(i % 3);
        s += x[static_cast<std::size_t>(i)];
    }
    for (auto& v : x) v *= a / s;

    auto objective = [&](const std::vector<double>& v) {
        double e = 0.0;
        for (double xi : v) e += alpha2 / xi;
        return e;
    };

    double step = a / static_cast<double>(m);
    double fx = objective(x);
    std::vector<double> trial(x.size());
    for (int it = 0; it < 200000; ++it) {
        double gnorm = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double g = -alpha2 / (x[i] * x[i]);
            trial[i] = x[i] - step * g;
            gnorm += g * g;
        }
        project_simplex(trial, a, floor_val);
        const double ft = objective(trial);
        if (ft < fx) {
            double delta = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                delta = std::max(delta, std::abs(trial[i] - x[i]));
            }
            x.swap(trial);
            fx = ft;
            step *= 1.2;
            if (delta < 1e-15 * a) break;
        } else {
            step *= 0.5;
            if (step < 1e-18) break;
        }
        (void)gnorm;
    }
    SegmentSolution sol;
    sol.lengths = std::move(x);
    sol.energy = fx;
    return sol;
}

double rescaled_path_distance(const std::vector<std::int32_t>& path,
                              const Polyline& reference) {
    if (path.size() < 17) {
        throw std::invalid_argument("rescaled_path_distance: need at least 16 steps");
    }
    const std::int64_t n = static_cast<std::int64_t>(path.size()) - 1;
    const double nd = static_cast<double>(n);
    const double norm = std::sqrt(2.0 * nd * std::log(std::log(nd)));
    double d = 0.0;
    // both functions are piecewise linear, so the sup is attained at a
    // breakpoint of one of them
    for (std::int64_t i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / nd;
        const double fx = static_cast<double>(path[static_cast<std::size_t>(i)]) / norm;
        d = std::max(d, std::abs(fx - reference.value_at(x)));
    }
    for (std::size_t b = 0; b < reference.breakpoints.size(); ++b) {
        const double x = reference.breakpoints[b];
        const double pos = x * nd;
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, path.size() - 1);
        const double t = pos - std::floor(pos);
        const double fx = ((1.0 - t) * path[lo] + t * path[hi]) / norm;
        d = std::max(d, std::abs(fx - reference.values[b]));
    }
    return d;
}

std::vector<Theorem16Row> theorem16_statistic(
    const std::vector<std::int64_t>& checkpoints, std::uint32_t legs,
    Xoshiro256& rng) {
    if (legs < 1) throw std::invalid_argument("theorem16_statistic: legs must be >= 1");
    if (checkpoints.empty()) {
        throw std::invalid_argument("theorem16_statistic: no checkpoints");
    }
    std::vector<std::int64_t> grid = checkpoints;
    std::sort(grid.begin(), grid.end());
    if (grid.front() < 16) {
        throw std::invalid_argument("theorem16_statistic: checkpoints must be >= 16");
    }
    const double target = 1.0 / static_cast<double>(2 * legs - 1);
    std::vector<std::int64_t> leg_max(legs, 0);
    std::vector<Theorem16Row> rows;
    rows.reserve(grid.size());
    std::int64_t v = 0;
    std::uint32_t leg = 0;
    double running_max = 0.0;
    std::size_t gi = 0;
    std::uint64_t block = 0;
    int nb = 0;
    for (std::int64_t step = 1; step <= grid.back(); ++step) {
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
        if (v > leg_max[leg]) leg_max[leg] = v;
        while (gi < grid.size() && step == grid[gi]) {
            const double n = static_cast<double>(grid[gi]);
            const std::int64_t mn =
                *std::min_element(leg_max.begin(), leg_max.end());
            const double stat = static_cast<double>(mn) /
                                std::sqrt(2.0 * n * std::log(std::log(n)));
            running_max = std::max(running_max, stat);
            rows.push_back({grid[gi], stat, running_max, target});
            ++gi;
        }
    }
    return rows;
}

}  // namespace spiderlab
