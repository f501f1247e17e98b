#include "doctest.h"
#include "oracles.hpp"
#include "spiderlab/rng.hpp"
#include "spiderlab/urn.hpp"

#include <cmath>

using namespace spiderlab;

TEST_CASE("exact coverage matches brute-force enumeration") {
    for (std::int64_t n = 1; n <= 4; ++n) {
        for (std::int64_t g = 0; g <= 8; ++g) {
            const double brute = oracles::brute_coverage(n, g, 1);
            CHECK(coverage_prob_exact(n, g) == doctest::Approx(brute).epsilon(1e-12));
        }
    }
}

TEST_CASE("at-least-k coverage matches brute-force enumeration") {
    for (std::int64_t n = 1; n <= 4; ++n) {
        for (std::int64_t g = 0; g <= 8; ++g) {
            for (std::int64_t k = 1; k <= 3; ++k) {
                const double brute = oracles::brute_coverage(n, g, k);
                CHECK(coverage_prob_at_least_k(n, g, k) ==
                      doctest::Approx(brute).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("edge cases") {
    CHECK(coverage_prob_exact(5, 4) == 0.0);      // pigeonhole
    CHECK(coverage_prob_exact(1, 0) == 0.0);      // no ball for the one urn
    CHECK(coverage_prob_at_least_k(3, 5, 2) == 0.0);
    CHECK(coverage_prob_at_least_k(1, 7, 3) == 1.0);
    CHECK(coverage_prob_exact(1, 1) == 1.0);
}

TEST_CASE("dp and inclusion-exclusion routes agree") {
    for (std::int64_t n : {5, 20, 60}) {
        const double lg = std::log(static_cast<double>(n));
        for (double mult : {1.0, 1.5, 2.5}) {
            const auto balls = static_cast<std::int64_t>(
                mult * static_cast<double>(n) * lg);
            for (std::int64_t k : {1, 2, 3}) {
                const double dp = coverage_prob_at_least_k_dp(n, balls, k);
                const double ie = coverage_prob_at_least_k_ie(n, balls, k);
                CHECK(dp == doctest::Approx(ie).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("coverage is monotone in balls and in -threshold") {
    double prev = -1.0;
    for (std::int64_t g = 0; g <= 60; g += 5) {
        const double p = coverage_prob_at_least_k(6, g, 2);
        CHECK(p >= prev - 1e-12);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        prev = p;
    }
    CHECK(coverage_prob_at_least_k(6, 40, 2) <=
          coverage_prob_at_least_k(6, 40, 1) + 1e-12);
}

TEST_CASE("er limit values") {
    CHECK(er_limit(0.0, 1) == doctest::Approx(std::exp(-1.0)));
    CHECK(er_limit(2.0, 1) == doctest::Approx(std::exp(-std::exp(-2.0))));
    CHECK(er_limit(0.0, 2) == doctest::Approx(std::exp(-1.0)));  // (m-1)! = 1
    CHECK(er_limit(0.0, 3) == doctest::Approx(std::exp(-0.5)));
    CHECK(er_limit(8.0, 1) > 0.999);
}

TEST_CASE("throw_balls scatters uniformly") {
    Xoshiro256 rng(44);
    const auto counts = throw_balls(10, 100000, rng);
    REQUIRE(counts.size() == 10);
    std::int64_t total = 0;
    double chi2 = 0.0;
    for (auto c : counts) {
        total += c;
        const double d = static_cast<double>(c) - 10000.0;
        chi2 += d * d / 10000.0;
    }
    CHECK(total == 100000);
    CHECK(chi2 < 27.9);  // 9 dof, 0.999 quantile
}

TEST_CASE("dp route reports an honest budget refusal") {
    CHECK_THROWS_AS(coverage_prob_at_least_k_dp(1000, 100000, 2, 1000),
                    ResourceError);
}

TEST_CASE("large-N coverage matches the asymptotic law loosely") {
    // sanity anchor far from the brute-force regime
    const std::int64_t n = 500;
    const auto balls = static_cast<std::int64_t>(
        std::ceil(500.0 * std::log(500.0)));
    const double p = coverage_prob_exact(n, balls);
    CHECK(p == doctest::Approx(std::exp(-1.0)).epsilon(0.05));
}
