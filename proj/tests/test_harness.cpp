#include "doctest.h"
#include "spiderlab/harness.hpp"
#include "spiderlab/urn.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace spiderlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/spiderlab-test-XXXXXX";
        REQUIRE(mkdtemp(tmpl) != nullptr);
        path = tmpl;
    }
};

}  // namespace

TEST_CASE("manifest parsing happy path") {
    const auto m = parse_manifest_text(
        "# comment\n"
        "[erdos-renyi]\n"
        "urns = 500   # trailing comment\n"
        "x_grid = -1, 0, 1\n");
    CHECK(m.experiment == "erdos-renyi");
    CHECK(m.values.at("urns") == "500");
    CHECK(m.values.at("x_grid") == "-1, 0, 1");
}

TEST_CASE("manifest errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_manifest_text("[erdos-renyi]\nurns 500\n", "m"),
                         doctest::Contains("m:2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_manifest_text("urns = 500\n", "m"),
                         doctest::Contains("m:1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_manifest_text("[unknown-x]\n", "m"),
                         doctest::Contains("known:"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_manifest_text("[erdos-renyi]\nurns = 1\nurns = 2\n", "m"),
        doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_AS(parse_manifest_text("", "m"), ConfigError);
}

TEST_CASE("registry covers the in-scope results") {
    const auto& reg = experiment_registry();
    for (const char* name :
         {"theorem-a", "theorem-1.1", "theorem-1.2", "theorem-1.3",
          "theorem-1.4", "theorem-1.5", "theorem-1.6", "lemma-3.2",
          "erdos-renyi", "hoeffding", "strassen-zigzag"}) {
        CHECK(is_registered(name));
    }
    CHECK(reg.size() == 11);
    CHECK_FALSE(is_registered("theorem-1.7"));
}

TEST_CASE("describe mentions the target constant") {
    CHECK(describe_experiment("theorem-1.6").find("1/(2K-1)") !=
          std::string::npos);
    CHECK(describe_experiment("lemma-3.2").find("2/n") != std::string::npos);
    CHECK_THROWS_WITH_AS(describe_experiment("unknown-x"),
                         doctest::Contains("strassen-zigzag"), ConfigError);
}

TEST_CASE("unknown manifest keys are rejected before running") {
    const auto m =
        parse_manifest_text("[strassen-zigzag]\nblorp = 3\n", "m");
    RunOptions opt;
    TempDir dir;
    opt.output_dir = dir.path;
    CHECK_THROWS_WITH_AS(run_manifest(m, opt), doctest::Contains("blorp"),
                         ConfigError);
}

TEST_CASE("run writes csv plus metadata and is deterministic") {
    const auto m = parse_manifest_text(
        "[theorem-1.1]\n"
        "legs = 20\n"
        "scales = 0.5, 1\n"
        "replications = 50\n"
        "seed = 5\n");
    TempDir dir;
    RunOptions opt;
    opt.output_dir = dir.path;
    opt.workers = 1;
    const auto first = run_manifest(m, opt);
    CHECK(first.rows == 2);
    const std::string csv1 = slurp(first.csv_path);
    CHECK(csv1.find("experiment,seed,engine") == 0);
    CHECK(slurp(first.meta_path).find("\"seed\": 5") != std::string::npos);

    opt.workers = 4;  // schedule must not leak into the CSV
    const auto second = run_manifest(m, opt);
    CHECK(slurp(second.csv_path) == csv1);

    RunOptions reseeded = opt;
    reseeded.has_seed_override = true;
    reseeded.seed_override = 6;
    const auto third = run_manifest(m, reseeded);
    CHECK(slurp(third.csv_path) != csv1);
}

TEST_CASE("set overrides rewrite manifest values") {
    const auto m = parse_manifest_text("[strassen-zigzag]\npeaks_grid = 2\n");
    TempDir dir;
    RunOptions opt;
    opt.output_dir = dir.path;
    opt.overrides.emplace_back("peaks_grid", "2, 3, 4");
    const auto result = run_manifest(m, opt);
    CHECK(result.rows == 3);
}

TEST_CASE("oversized budgets are refused without confirmation") {
    const auto m = parse_manifest_text(
        "[theorem-1.1]\n"
        "legs = 400\n"
        "scales = 2\n"
        "replications = 1000\n");  // ~2.3e10 steps, inside the confirm band
    TempDir dir;
    RunOptions opt;
    opt.output_dir = dir.path;
    CHECK_THROWS_WITH_AS(run_manifest(m, opt), doctest::Contains("--yes"),
                         ConfigError);

    const auto huge = parse_manifest_text(
        "[theorem-1.1]\n"
        "legs = 400\n"
        "scales = 2\n"
        "replications = 10000\n");  // ~2.3e11 steps, over the ceiling
    opt.assume_yes = true;
    CHECK_THROWS_AS(run_manifest(huge, opt), ResourceError);
}

TEST_CASE("emit_plot_data reshapes and flags schema mismatches") {
    const auto m = parse_manifest_text(
        "[erdos-renyi]\nurns = 200\nx_grid = 0, 1\n");
    TempDir dir;
    RunOptions opt;
    opt.output_dir = dir.path;
    const auto result = run_manifest(m, opt);

    const auto series = emit_plot_data(result.csv_path, "erdos-renyi");
    REQUIRE(series.rows.size() == 2);
    CHECK(series.columns.size() == 5);
    CHECK(series.rows[0][0] == doctest::Approx(0.0));
    CHECK(series.warning.empty());
    const auto text = format_plot_data(series);
    CHECK(text.find("x\testimate") == 0);

    // wrong experiment for this CSV: the diff names what is missing
    CHECK_THROWS_WITH_AS(emit_plot_data(result.csv_path, "theorem-1.6"),
                         doctest::Contains("missing columns"), ConfigError);

    // header-only CSV warns instead of failing
    const std::string empty_csv = dir.path + "/empty.csv";
    {
        std::ofstream out(empty_csv);
        out << "experiment,seed,urns,threshold,x,balls,coverage,limit,abs_error\n";
    }
    const auto none = emit_plot_data(empty_csv, "erdos-renyi");
    CHECK(none.rows.empty());
    CHECK_FALSE(none.warning.empty());
}

TEST_CASE("check mode reports per-experiment predicates") {
    const auto m = parse_manifest_text("[strassen-zigzag]\npeaks_grid = 1, 2\n");
    TempDir dir;
    RunOptions opt;
    opt.output_dir = dir.path;
    opt.check = true;
    const auto result = run_manifest(m, opt);
    CHECK(result.check_performed);
    CHECK(result.check_passed);
    CHECK(result.check_messages.empty());
}
