#include "doctest.h"
#include <algorithm>
#include <stdexcept>
#include "spiderlab/rng.hpp"
#include "spiderlab/strassen.hpp"

#include <cmath>

using namespace spiderlab;

TEST_CASE("zigzag K=2 hits the book values") {
    const auto f = zigzag(2);
    REQUIRE(f.breakpoints.size() == 4);
    CHECK(f.breakpoints[1] == doctest::Approx(1.0 / 3.0));
    CHECK(f.breakpoints[2] == doctest::Approx(2.0 / 3.0));
    CHECK(f.values[0] == 0.0);
    CHECK(f.values[1] == doctest::Approx(1.0 / 3.0));
    CHECK(f.values[2] == doctest::Approx(0.0));
    CHECK(f.values[3] == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("zigzag K=1 is the identity-slope extremal") {
    const auto f = zigzag(1);
    REQUIRE(f.breakpoints.size() == 2);
    CHECK(f.values[1] == doctest::Approx(1.0));
    CHECK(dirichlet_energy(f) == doctest::Approx(1.0));
}

TEST_CASE("zigzag energy is exactly one for all K") {
    for (int k = 1; k <= 10; ++k) {
        CHECK(std::abs(dirichlet_energy(zigzag(k)) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(zigzag(0), std::invalid_argument);
}

TEST_CASE("energy scales quadratically in the values") {
    auto f = zigzag(3);
    const double base = dirichlet_energy(f);
    for (auto& v : f.values) v *= 2.5;
    CHECK(dirichlet_energy(f) == doctest::Approx(2.5 * 2.5 * base));
    const Polyline line({0.0, 1.0}, {0.0, 0.4});
    CHECK(dirichlet_energy(line) == doctest::Approx(0.16));
}

TEST_CASE("projection is a fixed point on its own breakpoints") {
    const auto f = zigzag(2);
    const auto g = polyline_projection(f, f.breakpoints);
    REQUIRE(g.values.size() == f.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        CHECK(g.values[i] == doctest::Approx(f.values[i]));
    }
    CHECK(dirichlet_energy(g) == doctest::Approx(dirichlet_energy(f)));
}

TEST_CASE("projection of x^2 onto {0,1} drops the energy") {
    // dense polyline samples of x^2; true Dirichlet energy 4/3
    std::vector<double> xs, ys;
    const int m = 400;
    for (int i = 0; i <= m; ++i) {
        const double x = static_cast<double>(i) / m;
        xs.push_back(x);
        ys.push_back(x * x);
    }
    const Polyline f(xs, ys);
    CHECK(dirichlet_energy(f) == doctest::Approx(4.0 / 3.0).epsilon(1e-4));
    const auto g = polyline_projection(f, {0.0, 1.0});
    CHECK(dirichlet_energy(g) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("projection never increases energy; refinement is monotone") {
    Xoshiro256 rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        // random polyline on a random grid
        const int segs = 3 + static_cast<int>(rng.next_below(8));
        std::vector<double> xs{0.0}, ys{0.0};
        for (int i = 1; i < segs; ++i) {
            xs.push_back(rng.next_double());
        }
        xs.push_back(1.0);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        while (ys.size() < xs.size()) {
            ys.push_back(2.0 * rng.next_double() - 1.0);
        }
        const Polyline f(xs, ys);
        const double ef = dirichlet_energy(f);

        const Polyline coarse = polyline_projection(f, {0.0, 0.5, 1.0});
        CHECK(dirichlet_energy(coarse) <= ef + 1e-12);

        const Polyline fine =
            polyline_projection(f, {0.0, 0.25, 0.5, 0.75, 1.0});
        CHECK(dirichlet_energy(fine) <= ef + 1e-12);
        CHECK(dirichlet_energy(coarse) <= dirichlet_energy(fine) + 1e-12);
    }
}

TEST_CASE("segment minimization closed form and optimizer agree") {
    for (int k : {1, 2, 3, 5, 10}) {
        for (double a : {0.5, 1.0}) {
            const double alpha = 1.0 / (2.0 * k - 1.0);
            const SegmentQuery q{k, a, alpha};
            const auto closed = minimize_segments(q);
            const auto numeric = minimize_segments_numeric(q);
            CHECK(std::abs(closed.energy - numeric.energy) < 1e-9);
            for (double len : closed.lengths) {
                CHECK(len == doctest::Approx(a / (2 * k - 1)));
            }
            CHECK(closed.energy ==
                  doctest::Approx(alpha * alpha * (2 * k - 1) * (2 * k - 1) / a));
        }
    }
    // K=2, a=1, alpha=1/3 recovers the zigzag energy
    const auto sol = minimize_segments({2, 1.0, 1.0 / 3.0});
    CHECK(sol.energy == doctest::Approx(1.0));
}

TEST_CASE("halving the support doubles the minimal energy") {
    const auto full = minimize_segments({3, 1.0, 0.2});
    const auto half = minimize_segments({3, 0.5, 0.2});
    CHECK(half.energy == doctest::Approx(2.0 * full.energy));
}

TEST_CASE("perturbing the equal split strictly increases the objective") {
    Xoshiro256 rng(62);
    const int m = 5;
    const double a = 1.0;
    const double star = a / m;
    const double best = static_cast<double>(m * m) / a;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(m, star);
        // random zero-sum perturbation kept feasible
        const std::size_t i = rng.next_below(m);
        std::size_t j = rng.next_below(m);
        while (j == i) j = rng.next_below(m);
        const double eps = 0.4 * star * (rng.next_double() + 1e-3);
        x[i] += eps;
        x[j] -= eps;
        double obj = 0.0;
        for (double xi : x) obj += 1.0 / xi;
        CHECK(obj > best);
    }
}

TEST_CASE("rescaled distance of the zero path is the sup of the target") {
    const std::vector<std::int32_t> flat(1025, 0);
    for (int k : {1, 2, 3}) {
        CHECK(rescaled_path_distance(flat, zigzag(k)) ==
              doctest::Approx(1.0 / (2 * k - 1)));
    }
    const std::vector<std::int32_t> tiny(10, 0);
    CHECK_THROWS_AS(rescaled_path_distance(tiny, zigzag(2)),
                    std::invalid_argument);
}

TEST_CASE("distance to the zero function is the normalized max") {
    std::vector<std::int32_t> path(257, 0);
    for (int i = 1; i <= 256; ++i) {
        path[static_cast<std::size_t>(i)] =
            static_cast<std::int32_t>(std::min(i, 40));
    }
    const Polyline zero({0.0, 1.0}, {0.0, 0.0});
    const double norm = std::sqrt(2.0 * 256.0 * std::log(std::log(256.0)));
    CHECK(rescaled_path_distance(path, zero) == doctest::Approx(40.0 / norm));
}

TEST_CASE("theorem 1.6 statistic trajectory basics") {
    Xoshiro256 rng(63);
    const auto rows = theorem16_statistic({16, 64, 256, 1024, 4096}, 3, rng);
    REQUIRE(rows.size() == 5);
    double prev = 0.0;
    for (const auto& r : rows) {
        CHECK(r.target == doctest::Approx(0.2));
        CHECK(r.running_max >= r.statistic - 1e-12);
        CHECK(r.running_max >= prev - 1e-12);
        prev = r.running_max;
        CHECK(r.statistic >= 0.0);
    }
    CHECK_THROWS_AS(theorem16_statistic({8}, 2, rng), std::invalid_argument);
}
