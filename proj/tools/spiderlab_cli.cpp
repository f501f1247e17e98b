// Batch experiment runner. Verbs:
//   run <manifest>        simulate and write CSV + metadata
//   describe <name>       print what an experiment exercises
//   emit-plot-data <csv>  reshape a run CSV into plot columns
//   list                  print the experiment registry
// Exit codes: 0 ok, 2 config error, 3 resource error, 4 failed --check.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spiderlab/harness.hpp"
#include "spiderlab/urn.hpp"

namespace {

constexpr const char* kOutputDirEnv = "SPIDERLAB_OUT";

int do_run(const std::string& manifest_path, spiderlab::RunOptions opt) {
    const auto manifest = spiderlab::parse_manifest_file(manifest_path);
    opt.confirm = [](double budget) {
        std::cerr << "about to simulate ~" << budget
                  << " steps; continue? [y/N] " << std::flush;
        std::string answer;
        if (!std::getline(std::cin, answer)) return false;
        return !answer.empty() && (answer[0] == 'y' || answer[0] == 'Y');
    };
    const auto result = spiderlab::run_manifest(manifest, opt);
    std::cout << "wrote " << result.csv_path << " (" << result.rows
              << " rows) and " << result.meta_path << " in "
              << result.wall_seconds << " s\n";
    if (result.check_performed) {
        if (result.check_passed) {
            std::cout << "check: pass\n";
        } else {
            for (const auto& msg : result.check_messages) {
                std::cerr << "check: " << msg << "\n";
            }
            return 4;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spider-walk experiment lab"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string name;
    std::string csv_path;
    std::vector<std::string> sets;
    spiderlab::RunOptions opt;
    std::int64_t seed_flag = 0;
    if (const char* env = std::getenv(kOutputDirEnv)) opt.output_dir = env;

    auto* run = app.add_subcommand("run", "run an experiment manifest");
    run->add_option("manifest", manifest_path, "manifest file")->required();
    run->add_option("--workers", opt.workers, "worker threads (0 = all cores)");
    run->add_option("--out-dir", opt.output_dir, "output directory");
    auto* seed_opt =
        run->add_option("--seed", seed_flag, "override the manifest seed");
    run->add_option("--set", sets, "override a manifest key, key=value")
        ->expected(-1);
    run->add_flag("--yes", opt.assume_yes, "skip the large-budget prompt");
    run->add_flag("--check", opt.check,
                  "evaluate the experiment's acceptance predicate");

    auto* describe = app.add_subcommand("describe", "describe an experiment");
    describe->add_option("name", name, "experiment name")->required();

    auto* plot = app.add_subcommand("emit-plot-data",
                                    "reshape a run CSV into plot columns");
    plot->add_option("csv", csv_path, "CSV produced by run")->required();
    plot->add_option("--experiment", name, "experiment name")->required();

    auto* list = app.add_subcommand("list", "list known experiments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!seed_opt->empty()) {
                opt.has_seed_override = true;
                opt.seed_override = static_cast<std::uint64_t>(seed_flag);
            }
            for (const auto& kv : sets) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    throw spiderlab::ConfigError("--set needs key=value, got '" +
                                                 kv + "'");
                }
                opt.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
            }
            return do_run(manifest_path, opt);
        }
        if (describe->parsed()) {
            std::cout << spiderlab::describe_experiment(name);
            return 0;
        }
        if (plot->parsed()) {
            const auto series = spiderlab::emit_plot_data(csv_path, name);
            if (!series.warning.empty()) {
                std::cerr << "warning: " << series.warning << "\n";
            }
            std::cout << spiderlab::format_plot_data(series);
            return 0;
        }
        if (list->parsed()) {
            for (const auto& n : spiderlab::experiment_registry()) {
                std::cout << n << "\n";
            }
            return 0;
        }
    } catch (const spiderlab::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const spiderlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
