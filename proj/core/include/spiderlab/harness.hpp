#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spiderlab {

inline constexpr const char* kVersion = "0.1.0";

// Manifest or flag problem; maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One experiment section: [name] followed by key = value lines.
// Values keep their raw text; drivers parse them on demand.
struct Manifest {
    std::string experiment;
    std::map<std::string, std::string> values;
    std::string source;  // file path, for error messages
};

/// Parse manifest text. Exactly one [section] whose name must be in the
/// registry; '#' starts a comment; malformed lines raise ConfigError
/// with the line number.
Manifest parse_manifest_text(const std::string& text,
                             const std::string& source = "<inline>");

Manifest parse_manifest_file(const std::string& path);

const std::vector<std::string>& experiment_registry();
bool is_registered(const std::string& name);

/// Human-readable account of the experiment: the claim exercised, the
/// target formula, accepted keys with defaults, and the check tolerance.
/// Unknown name raises ConfigError listing the registry.
std::string describe_experiment(const std::string& name);

struct RunOptions {
    std::string output_dir;  // empty = current directory
    int workers = 0;         // 0 = hardware concurrency
    bool assume_yes = false;
    bool check = false;      // evaluate the experiment's acceptance predicate
    bool has_seed_override = false;
    std::uint64_t seed_override = 0;
    std::vector<std::pair<std::string, std::string>> overrides;  // --set key=value
    // Called with the computed step budget for runs above the confirm
    // threshold (1e10 steps); return true to proceed. Null means refuse.
    std::function<bool(double)> confirm;
};

struct RunResult {
    std::string csv_path;
    std::string meta_path;
    std::int64_t rows = 0;
    double wall_seconds = 0.0;
    bool check_performed = false;
    bool check_passed = true;
    std::vector<std::string> check_messages;
};

/// Run the experiment: writes the CSV and a JSON metadata file next to
/// it. Deterministic CSV given (manifest, seed), whatever the worker
/// count. ConfigError for bad keys, ResourceError for budgets over 1e11
/// steps (or unconfirmed budgets over 1e10).
RunResult run_manifest(const Manifest& manifest, const RunOptions& options);

struct PlotSeries {
    std::vector<std::string> columns;  // x, estimate, ci_low, ci_high, target
    std::vector<std::vector<double>> rows;
    std::string warning;  // set when the CSV had a header but no rows
};

/// Re-shape a run CSV into plot-ready columns. The experiment name picks
/// the column mapping; a header that does not match raises ConfigError
/// with the missing/unexpected column diff.
PlotSeries emit_plot_data(const std::string& csv_path,
                          const std::string& experiment);

std::string format_plot_data(const PlotSeries& series);

}  // namespace spiderlab
