#include "doctest.h"
#include <stdexcept>
#include "spiderlab/limit_lab.hpp"
#include "spiderlab/stats.hpp"

#include <cmath>

using namespace spiderlab;

TEST_CASE("n_steps arithmetic") {
    CHECK(n_steps(3, 1, 1.0) == 11);  // ceil((3 ln 3)^2)
    const auto base = n_steps(50, 2, 1.0);
    const auto doubled = n_steps(50, 2, 2.0);
    CHECK(doubled >= 4 * base - 4);
    CHECK(doubled <= 4 * base + 4);
    CHECK_THROWS_AS(n_steps(1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("p_of_c endpoints and the quadrature cross-check") {
    CHECK(p_of_c(1.0) == doctest::Approx(0.3173105078629).epsilon(1e-9));
    CHECK(p_of_c(1.0) ==
          doctest::Approx(normal_tail_quadrature(1.0)).epsilon(1e-10));
    CHECK(p_of_c(100.0) > 0.99);
    CHECK(p_of_c(0.01) < 1e-10);
    CHECK_THROWS_AS(p_of_c(0.0), std::invalid_argument);
}

TEST_CASE("regime check") {
    CHECK(check_regime(100, 5).in_regime);       // 100/ln 100 ~ 21.7
    CHECK_FALSE(check_regime(10, 10).in_regime); // 10/ln 10 ~ 4.34
    CHECK(check_regime(2, 1).in_regime);
    CHECK(check_regime(50, 1).in_regime);
}

TEST_CASE("engine naming round-trips") {
    for (Engine e : {Engine::Naive, Engine::Excursion, Engine::RaoBlackwell}) {
        CHECK(engine_from_name(engine_name(e)) == e);
    }
    CHECK_THROWS_AS(engine_from_name("bogus"), std::invalid_argument);
}

namespace {

ExperimentConfig small_config(Engine engine, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.legs = 5;
    cfg.height = 1;
    cfg.scale = 1.0;
    cfg.replications = 3000;
    cfg.seed = seed;
    cfg.engine = engine;
    cfg.workers = 1;
    return cfg;
}

}  // namespace

TEST_CASE("the three engines agree within overlapping intervals") {
    const auto naive = estimate_limit_probability(small_config(Engine::Naive, 1));
    const auto exc =
        estimate_limit_probability(small_config(Engine::Excursion, 2));
    const auto rb =
        estimate_limit_probability(small_config(Engine::RaoBlackwell, 3));
    CHECK(naive.ci_low <= exc.ci_high);
    CHECK(exc.ci_low <= naive.ci_high);
    CHECK(rb.ci_low <= naive.ci_high);
    CHECK(naive.ci_low <= rb.ci_high);
    CHECK(rb.point >= 0.0);
    CHECK(rb.point <= 1.0);
    CHECK(rb.ci_low <= rb.point);
    CHECK(rb.point <= rb.ci_high);
}

TEST_CASE("coupled scales are monotone in c") {
    ExperimentConfig cfg = small_config(Engine::Excursion, 7);
    const auto rows = estimate_at_scales(cfg, {0.5, 1.0, 2.0});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].point <= rows[1].point);
    CHECK(rows[1].point <= rows[2].point);
    CHECK(rows[0].steps < rows[1].steps);
    CHECK(rows[2].target == doctest::Approx(p_of_c(2.0)));
}

TEST_CASE("higher visit threshold cannot raise the probability") {
    ExperimentConfig cfg = small_config(Engine::RaoBlackwell, 11);
    const auto k1 = estimate_limit_probability(cfg);
    cfg.visit_threshold = 2;
    const auto k2 = estimate_limit_probability(cfg);
    CHECK(k2.point <= k1.point + 1e-12);
}

TEST_CASE("step budget is enforced up front") {
    ExperimentConfig cfg = small_config(Engine::Naive, 1);
    cfg.legs = 5000;
    cfg.height = 100;
    cfg.replications = 1000000;
    CHECK_THROWS_AS(estimate_limit_probability(cfg), ResourceError);
}

TEST_CASE("schedule values") {
    CHECK(schedule_value("log-log", 100) ==
          doctest::Approx(std::log(std::log(100.0))));
    CHECK(schedule_value("inv-log-log", 100) ==
          doctest::Approx(1.0 / std::log(std::log(100.0))));
    CHECK_THROWS_AS(schedule_value("nope", 100), std::invalid_argument);
}

TEST_CASE("schedule sweep targets and warnings") {
    ExperimentConfig cfg = small_config(Engine::RaoBlackwell, 5);
    cfg.replications = 200;
    cfg.schedule = "log-log";
    const auto rows = sweep_f_schedule(cfg, {16, 32});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].legs == 16);
    CHECK(rows[0].f_value == doctest::Approx(std::log(std::log(16.0))));
    CHECK(rows[0].estimate.target == doctest::Approx(1.0));
    cfg.schedule = "inv-log-log";
    const auto down = sweep_f_schedule(cfg, {16, 32});
    CHECK(down[0].estimate.target == doctest::Approx(0.0));
}

TEST_CASE("lemma 3.2 report is coherent") {
    const auto rep = verify_lemma32(1 << 14, 4, 100, 9);
    CHECK(rep.replications == 100);
    CHECK(rep.violations >= 0);
    CHECK(rep.frequency <= 1.0);
    CHECK(rep.bound == doctest::Approx(2.0 / (1 << 14)));
    CHECK(rep.threshold ==
          doctest::Approx(4.0 * std::pow(16384.0, 0.25) *
                          std::pow(std::log(16384.0), 0.75)));
    CHECK(rep.frequency <= rep.bound + 0.05);  // loose sanity margin
}

TEST_CASE("chung samples keep a nonincreasing per-path running min") {
    const auto samples = chung_statistic({64, 256, 1024, 4096}, 20, 13);
    REQUIRE(samples.size() == 80);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].running_min <= samples[i].statistic + 1e-12);
        if (i % 4 != 0) {
            CHECK(samples[i].running_min <= samples[i - 1].running_min + 1e-12);
        }
    }
    CHECK(chung_constant() == doctest::Approx(3.14159265358979 / std::sqrt(8.0)));
}

TEST_CASE("worker count does not change results") {
    ExperimentConfig cfg = small_config(Engine::RaoBlackwell, 17);
    cfg.replications = 500;
    cfg.workers = 1;
    const auto one = estimate_limit_probability(cfg);
    cfg.workers = 4;
    const auto four = estimate_limit_probability(cfg);
    CHECK(one.point == four.point);
    CHECK(one.ci_low == four.ci_low);
    CHECK(one.ci_high == four.ci_high);
}
