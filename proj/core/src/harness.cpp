#include "spiderlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spiderlab/limit_lab.hpp"
#include "spiderlab/stats.hpp"
#include "spiderlab/strassen.hpp"
#include "spiderlab/urn.hpp"

namespace spiderlab {

namespace {

constexpr double kConfirmThreshold = 1e10;
constexpr double kHardBudget = 1e11;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_i(std::int64_t v) { return std::to_string(v); }

// Typed accessors over the manifest key/value map. Every lookup records
// the key as seen so unknown keys can be reported afterwards.
class Params {
public:
    explicit Params(const Manifest& m) : values_(m.values) {}

    std::int64_t get_i64(const std::string& key, std::int64_t def) {
        auto raw = fetch(key);
        if (!raw) return def;
        try {
            std::size_t pos = 0;
            const std::int64_t v = std::stoll(*raw, &pos);
            if (pos != raw->size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': expected integer, got '" + *raw + "'");
        }
    }

    double get_f64(const std::string& key, double def) {
        auto raw = fetch(key);
        if (!raw) return def;
        try {
            std::size_t pos = 0;
            const double v = std::stod(*raw, &pos);
            if (pos != raw->size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': expected number, got '" + *raw + "'");
        }
    }

    std::string get_str(const std::string& key, const std::string& def) {
        auto raw = fetch(key);
        return raw ? *raw : def;
    }

    std::vector<double> get_f64_list(const std::string& key,
                                     const std::string& def) {
        auto raw = fetch(key);
        const std::string text = raw ? *raw : def;
        std::vector<double> out;
        for (const auto& item : split_list(text)) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ConfigError("key '" + key + "': bad number '" + item + "'");
            }
        }
        if (out.empty()) throw ConfigError("key '" + key + "': empty list");
        return out;
    }

    std::vector<std::int64_t> get_i64_list(const std::string& key,
                                           const std::string& def) {
        auto raw = fetch(key);
        const std::string text = raw ? *raw : def;
        std::vector<std::int64_t> out;
        for (const auto& item : split_list(text)) {
            try {
                std::size_t pos = 0;
                out.push_back(std::stoll(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ConfigError("key '" + key + "': bad integer '" + item + "'");
            }
        }
        if (out.empty()) throw ConfigError("key '" + key + "': empty list");
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : values_) {
            (void)value;
            if (!seen_.count(key)) {
                throw ConfigError("unknown key '" + key + "'");
            }
        }
    }

private:
    const std::string* fetch(const std::string& key) {
        seen_.insert(key);
        auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> seen_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct DriverOutput {
    CsvTable table;
    double step_budget = 0.0;   // known before simulation
    bool check_passed = true;
    std::vector<std::string> check_messages;
};

void check_fail(DriverOutput& out, const std::string& msg) {
    out.check_passed = false;
    out.check_messages.push_back(msg);
}

Engine parse_engine(Params& p) {
    return engine_from_name(p.get_str("engine", "rao-blackwell"));
}

// ---- theorem-a / theorem-1.1 / theorem-1.4: fixed N, scale grid ----

double scale_family_budget(const ExperimentConfig& cfg,
                           const std::vector<double>& scales) {
    double worst = 0.0;
    for (double c : scales) {
        worst = std::max(
            worst, static_cast<double>(n_steps(cfg.legs, cfg.height, c)));
    }
    return worst * static_cast<double>(cfg.replications);
}

DriverOutput run_scale_family(const std::string& name, Params& p,
                              std::uint64_t seed, int workers, bool dry) {
    const bool is_a = name == "theorem-a";
    const bool is_14 = name == "theorem-1.4";
    ExperimentConfig cfg;
    cfg.legs = static_cast<std::uint32_t>(p.get_i64("legs", 200));
    cfg.height = is_a ? 1 : p.get_i64("height", 1);
    cfg.visit_threshold = is_a ? 1 : p.get_i64("threshold", is_14 ? 2 : 1);
    cfg.replications = p.get_i64("replications", 1000);
    cfg.engine = parse_engine(p);
    cfg.seed = seed;
    cfg.workers = workers;
    std::vector<double> scales = p.get_f64_list("scales", "0.5, 1, 2");
    const double tolerance = p.get_f64("tolerance", is_14 ? 0.07 : 0.05);
    p.finish();

    std::sort(scales.begin(), scales.end());
    DriverOutput out;
    out.step_budget = scale_family_budget(cfg, scales);
    out.table.header = {"experiment", "seed",   "engine",       "legs",
                        "height",     "threshold", "scale",     "steps",
                        "replications", "point", "ci_low",      "ci_high",
                        "target",     "in_regime"};
    if (dry) return out;

    const auto estimates = estimate_at_scales(cfg, scales);
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const auto& e = estimates[i];
        out.table.rows.push_back(
            {name, fmt_i(static_cast<std::int64_t>(seed)),
             engine_name(e.engine), fmt_i(cfg.legs), fmt_i(cfg.height),
             fmt_i(cfg.visit_threshold), fmt_g(scales[i]), fmt_i(e.steps),
             fmt_i(e.replications), fmt_g(e.point), fmt_g(e.ci_low),
             fmt_g(e.ci_high), fmt_g(e.target), e.in_regime ? "1" : "0"});
        if (std::abs(e.point - e.target) > tolerance) {
            check_fail(out, name + ": scale " + fmt_g(scales[i]) +
                                " estimate " + fmt_g(e.point) +
                                " misses target " + fmt_g(e.target) +
                                " by more than " + fmt_g(tolerance));
        }
    }
    return out;
}

// ---- theorem-1.2 / theorem-1.3 / theorem-1.5: f-schedule sweeps ----

DriverOutput run_schedule_family(const std::string& name, Params& p,
                                 std::uint64_t seed, int workers, bool dry) {
    const bool vanishing = name == "theorem-1.3";
    const bool is_15 = name == "theorem-1.5";
    ExperimentConfig cfg;
    cfg.height = p.get_i64("height", 1);
    cfg.visit_threshold = p.get_i64("threshold", is_15 ? 2 : 1);
    cfg.replications = p.get_i64("replications", 1000);
    cfg.engine = parse_engine(p);
    cfg.schedule = vanishing ? "inv-log-log" : "log-log";
    cfg.seed = seed;
    cfg.workers = workers;
    const auto legs_raw = p.get_i64_list("legs_grid", "50, 100, 200, 400");
    const double endpoint = p.get_f64("endpoint", vanishing ? 0.1 : 0.9);
    p.finish();

    std::vector<std::uint32_t> leg_grid;
    for (std::int64_t n : legs_raw) {
        if (n < 3) throw ConfigError("legs_grid entries must be >= 3");
        leg_grid.push_back(static_cast<std::uint32_t>(n));
    }

    DriverOutput out;
    for (std::uint32_t legs : leg_grid) {
        const double f = schedule_value(cfg.schedule, legs);
        out.step_budget +=
            static_cast<double>(n_steps(legs, cfg.height, f)) *
            static_cast<double>(cfg.replications);
    }
    out.table.header = {"experiment", "seed",   "engine",   "legs",
                        "height",     "threshold", "schedule", "f_value",
                        "steps",      "replications", "point", "ci_low",
                        "ci_high",    "target", "warning"};
    if (dry) return out;

    const auto sweep = sweep_f_schedule(cfg, leg_grid);
    for (const auto& row : sweep) {
        const auto& e = row.estimate;
        out.table.rows.push_back(
            {name, fmt_i(static_cast<std::int64_t>(seed)),
             engine_name(e.engine), fmt_i(row.legs), fmt_i(cfg.height),
             fmt_i(cfg.visit_threshold), cfg.schedule, fmt_g(row.f_value),
             fmt_i(e.steps), fmt_i(e.replications), fmt_g(e.point),
             fmt_g(e.ci_low), fmt_g(e.ci_high), fmt_g(e.target),
             row.warning});
    }
    if (!sweep.empty()) {
        const double last = sweep.back().estimate.point;
        if (vanishing ? (last >= endpoint) : (last <= endpoint)) {
            check_fail(out, name + ": endpoint estimate " + fmt_g(last) +
                                (vanishing ? " not below " : " not above ") +
                                fmt_g(endpoint));
        }
    }
    return out;
}

// ---- theorem-1.6: single-walk LIL trajectory ----

DriverOutput run_theorem16(Params& p, std::uint64_t seed, bool dry) {
    const std::int64_t legs = p.get_i64("legs", 2);
    const std::int64_t steps = p.get_i64("steps", 1 << 24);
    const double band_low = p.get_f64("band_low", 0.3);
    const double band_high = p.get_f64("band_high", 1.6);
    p.finish();
    if (legs < 1) throw ConfigError("legs must be >= 1");
    if (steps < 16) throw ConfigError("steps must be >= 16");

    DriverOutput out;
    out.step_budget = static_cast<double>(steps);
    out.table.header = {"experiment", "seed",        "legs",  "steps",
                        "statistic",  "running_max", "target"};
    if (dry) return out;

    std::vector<std::int64_t> checkpoints;
    for (std::int64_t n = 16; n < steps; n *= 2) checkpoints.push_back(n);
    checkpoints.push_back(steps);

    Xoshiro256 rng = split_stream({seed, 0x16ULL}, 0);
    const auto rows = theorem16_statistic(
        checkpoints, static_cast<std::uint32_t>(legs), rng);
    for (const auto& r : rows) {
        out.table.rows.push_back({"theorem-1.6",
                                  fmt_i(static_cast<std::int64_t>(seed)),
                                  fmt_i(legs), fmt_i(r.steps),
                                  fmt_g(r.statistic), fmt_g(r.running_max),
                                  fmt_g(r.target)});
    }
    const auto& last = rows.back();
    if (last.running_max <= band_low * last.target ||
        last.running_max >= band_high * last.target) {
        check_fail(out, "theorem-1.6: running max " + fmt_g(last.running_max) +
                            " outside (" + fmt_g(band_low * last.target) +
                            ", " + fmt_g(band_high * last.target) + ")");
    }
    return out;
}

// ---- lemma-3.2: deviation frequencies over an (n, L) grid ----

DriverOutput run_lemma32(Params& p, std::uint64_t seed, bool dry) {
    const auto steps_grid = p.get_i64_list("steps_grid", "16384, 65536, 262144");
    const auto heights = p.get_i64_list("heights", "2, 8");
    const std::int64_t reps = p.get_i64("replications", 1000);
    p.finish();

    DriverOutput out;
    for (std::int64_t n : steps_grid) {
        // extension past the horizon costs a few extra excursions, minor
        out.step_budget += 1.1 * static_cast<double>(n) *
                           static_cast<double>(reps) *
                           static_cast<double>(heights.size());
    }
    out.table.header = {"experiment", "seed",       "steps",
                        "height",     "replications", "violations",
                        "frequency",  "threshold",  "bound"};
    if (dry) return out;

    for (std::int64_t n : steps_grid) {
        for (std::int64_t height : heights) {
            const auto report = verify_lemma32(n, height, reps, seed);
            out.table.rows.push_back(
                {"lemma-3.2", fmt_i(static_cast<std::int64_t>(seed)),
                 fmt_i(report.steps), fmt_i(report.height),
                 fmt_i(report.replications), fmt_i(report.violations),
                 fmt_g(report.frequency), fmt_g(report.threshold),
                 fmt_g(report.bound)});
            const double slack =
                3.0 * std::sqrt(report.bound / static_cast<double>(reps));
            if (report.frequency > report.bound + slack) {
                check_fail(out, "lemma-3.2: frequency " +
                                    fmt_g(report.frequency) + " above " +
                                    fmt_g(report.bound + slack) + " at n=" +
                                    fmt_i(n) + ", L=" + fmt_i(height));
            }
        }
    }
    return out;
}

// ---- erdos-renyi: exact coverage vs the double-exponential limit ----

DriverOutput run_erdos_renyi(Params& p, std::uint64_t seed, bool dry) {
    const std::int64_t urns = p.get_i64("urns", 10000);
    const std::int64_t threshold = p.get_i64("threshold", 1);
    const auto x_grid = p.get_f64_list("x_grid", "-1, 0, 1, 2");
    const double tolerance =
        p.get_f64("tolerance", threshold == 1 ? 0.01 : 0.02);
    p.finish();
    if (urns < 1 || threshold < 1) {
        throw ConfigError("urns and threshold must be >= 1");
    }

    DriverOutput out;
    out.table.header = {"experiment", "seed",  "urns",    "threshold", "x",
                        "balls",      "coverage", "limit", "abs_error"};
    if (dry) return out;

    const double nd = static_cast<double>(urns);
    for (double x : x_grid) {
        // balls = N ln N + (m-1) N ln ln N + N x
        const double mean = nd * std::log(nd) +
                            static_cast<double>(threshold - 1) * nd *
                                std::log(std::log(nd)) +
                            nd * x;
        const auto balls = static_cast<std::int64_t>(std::ceil(mean));
        const double coverage =
            threshold == 1 ? coverage_prob_exact(urns, balls)
                           : coverage_prob_at_least_k(urns, balls, threshold);
        const double limit = er_limit(x, threshold);
        const double err = std::abs(coverage - limit);
        out.table.rows.push_back(
            {"erdos-renyi", fmt_i(static_cast<std::int64_t>(seed)),
             fmt_i(urns), fmt_i(threshold), fmt_g(x), fmt_i(balls),
             fmt_g(coverage), fmt_g(limit), fmt_g(err)});
        if (err >= tolerance) {
            check_fail(out, "erdos-renyi: |coverage - limit| = " + fmt_g(err) +
                                " at x = " + fmt_g(x) + " exceeds " +
                                fmt_g(tolerance));
        }
    }
    return out;
}

// ---- hoeffding: deviation probabilities vs 2 exp(-2 k x^2) ----

DriverOutput run_hoeffding(Params& p, std::uint64_t seed, bool dry) {
    const auto horizons = p.get_i64_list("horizons", "100, 1000, 10000");
    const auto deviations = p.get_f64_list("deviations", "0.05, 0.1, 0.2");
    const std::int64_t reps = p.get_i64("replications", 2000);
    const double prob = p.get_f64("p", 0.5);
    p.finish();

    DriverOutput out;
    for (std::int64_t k : horizons) {
        out.step_budget += 1.5 * static_cast<double>(k) *
                           static_cast<double>(reps) *
                           static_cast<double>(deviations.size());
    }
    out.table.header = {"experiment",   "seed",      "bound_horizon",
                        "deviation",    "summands",  "replications",
                        "empirical",    "bound"};
    if (dry) return out;

    RngStream master{seed, 0x40EFULL};
    std::uint64_t stream = 0;
    for (std::int64_t k : horizons) {
        for (double x : deviations) {
            // the full case j = k and the padded case j = k/2
            for (std::int64_t j : {k, std::max<std::int64_t>(1, k / 2)}) {
                BernoulliSumSpec spec{k, x, j};
                Xoshiro256 rng = split_stream(master, stream++);
                const auto r = hoeffding_check(spec, prob, reps, rng);
                out.table.rows.push_back(
                    {"hoeffding", fmt_i(static_cast<std::int64_t>(seed)),
                     fmt_i(k), fmt_g(x), fmt_i(j), fmt_i(r.replications),
                     fmt_g(r.empirical), fmt_g(r.bound)});
                const double var = std::max(r.empirical * (1.0 - r.empirical),
                                            r.bound * (1.0 - r.bound));
                const double slack =
                    3.0 * std::sqrt(var / static_cast<double>(reps));
                if (r.empirical > r.bound + slack) {
                    check_fail(out, "hoeffding: empirical " +
                                        fmt_g(r.empirical) + " above bound " +
                                        fmt_g(r.bound) + " + slack at k=" +
                                        fmt_i(k) + ", x=" + fmt_g(x) +
                                        ", j=" + fmt_i(j));
                }
            }
        }
    }
    return out;
}

// ---- strassen-zigzag: analytic checks on the extremal family ----

DriverOutput run_strassen_zigzag(Params& p, std::uint64_t seed, bool dry) {
    const auto peaks_grid =
        p.get_i64_list("peaks_grid", "1, 2, 3, 4, 5, 6, 7, 8, 9, 10");
    const double support = p.get_f64("support", 1.0);
    p.finish();

    DriverOutput out;
    out.table.header = {"experiment",  "seed",          "peaks",
                        "energy",      "peak_count",    "peak_height",
                        "closed_energy", "numeric_energy", "gap"};
    if (dry) return out;

    for (std::int64_t kk : peaks_grid) {
        if (kk < 1) throw ConfigError("peaks_grid entries must be >= 1");
        const int K = static_cast<int>(kk);
        const Polyline f = zigzag(K);
        const double energy = dirichlet_energy(f);
        const double target_height = 1.0 / static_cast<double>(2 * K - 1);

        // the last maximum of |f| sits at the right endpoint
        int peak_count = 0;
        double peak_height = 0.0;
        for (std::size_t j = 1; j < f.values.size(); ++j) {
            const double a = std::abs(f.values[j]);
            const bool left = a > std::abs(f.values[j - 1]);
            const bool right =
                j + 1 == f.values.size() || a > std::abs(f.values[j + 1]);
            if (left && right) {
                ++peak_count;
                peak_height = std::max(peak_height, a);
            }
        }

        SegmentQuery q{K, support, target_height};
        const auto closed = minimize_segments(q);
        const auto numeric = minimize_segments_numeric(q);
        const double gap = std::abs(closed.energy - numeric.energy);

        out.table.rows.push_back(
            {"strassen-zigzag", fmt_i(static_cast<std::int64_t>(seed)),
             fmt_i(kk), fmt_g(energy), fmt_i(peak_count), fmt_g(peak_height),
             fmt_g(closed.energy), fmt_g(numeric.energy), fmt_g(gap)});

        if (std::abs(energy - 1.0) > 1e-12) {
            check_fail(out, "strassen-zigzag: energy " + fmt_g(energy) +
                                " differs from 1 at K=" + fmt_i(kk));
        }
        if (peak_count != K || std::abs(peak_height - target_height) > 1e-12) {
            check_fail(out, "strassen-zigzag: peak profile wrong at K=" +
                                fmt_i(kk));
        }
        if (gap > 1e-9) {
            check_fail(out, "strassen-zigzag: optimizer gap " + fmt_g(gap) +
                                " at K=" + fmt_i(kk));
        }
    }
    return out;
}

DriverOutput dispatch(const std::string& name, Params& p, std::uint64_t seed,
                      int workers, bool dry) {
    if (name == "theorem-a" || name == "theorem-1.1" || name == "theorem-1.4") {
        return run_scale_family(name, p, seed, workers, dry);
    }
    if (name == "theorem-1.2" || name == "theorem-1.3" ||
        name == "theorem-1.5") {
        return run_schedule_family(name, p, seed, workers, dry);
    }
    if (name == "theorem-1.6") return run_theorem16(p, seed, dry);
    if (name == "lemma-3.2") return run_lemma32(p, seed, dry);
    if (name == "erdos-renyi") return run_erdos_renyi(p, seed, dry);
    if (name == "hoeffding") return run_hoeffding(p, seed, dry);
    if (name == "strassen-zigzag") return run_strassen_zigzag(p, seed, dry);
    throw ConfigError("no driver for experiment '" + name + "'");
}

struct PlotMapping {
    std::string x, estimate, ci_low, ci_high, target;
};

PlotMapping plot_mapping(const std::string& experiment) {
    if (experiment == "theorem-a" || experiment == "theorem-1.1" ||
        experiment == "theorem-1.4") {
        return {"scale", "point", "ci_low", "ci_high", "target"};
    }
    if (experiment == "theorem-1.2" || experiment == "theorem-1.3" ||
        experiment == "theorem-1.5") {
        return {"legs", "point", "ci_low", "ci_high", "target"};
    }
    if (experiment == "theorem-1.6") {
        return {"steps", "statistic", "statistic", "running_max", "target"};
    }
    if (experiment == "lemma-3.2") {
        return {"steps", "frequency", "frequency", "frequency", "bound"};
    }
    if (experiment == "erdos-renyi") {
        return {"x", "coverage", "coverage", "coverage", "limit"};
    }
    if (experiment == "hoeffding") {
        return {"deviation", "empirical", "empirical", "empirical", "bound"};
    }
    if (experiment == "strassen-zigzag") {
        return {"peaks", "energy", "energy", "energy", "closed_energy"};
    }
    throw ConfigError("unknown experiment '" + experiment + "'; known: " +
                      [] {
                          std::string all;
                          for (const auto& n : experiment_registry()) {
                              if (!all.empty()) all += ", ";
                              all += n;
                          }
                          return all;
                      }());
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

const std::vector<std::string>& experiment_registry() {
    static const std::vector<std::string> names = {
        "theorem-a",   "theorem-1.1", "theorem-1.2", "theorem-1.3",
        "theorem-1.4", "theorem-1.5", "theorem-1.6", "lemma-3.2",
        "erdos-renyi", "hoeffding",   "strassen-zigzag"};
    return names;
}

bool is_registered(const std::string& name) {
    const auto& reg = experiment_registry();
    return std::find(reg.begin(), reg.end(), name) != reg.end();
}

Manifest parse_manifest_text(const std::string& text,
                             const std::string& source) {
    Manifest m;
    m.source = source;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    bool have_section = false;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(source + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            }
            if (have_section) {
                throw ConfigError(source + ":" + std::to_string(lineno) +
                                  ": a manifest holds exactly one experiment "
                                  "section");
            }
            m.experiment = trim(line.substr(1, line.size() - 2));
            if (!is_registered(m.experiment)) {
                std::string all;
                for (const auto& n : experiment_registry()) {
                    if (!all.empty()) all += ", ";
                    all += n;
                }
                throw ConfigError(source + ":" + std::to_string(lineno) +
                                  ": unknown experiment '" + m.experiment +
                                  "'; known: " + all);
            }
            have_section = true;
            continue;
        }
        if (!have_section) {
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": key before any [experiment] section");
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": empty key");
        }
        if (m.values.count(key)) {
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        }
        m.values[key] = value;
    }
    if (!have_section) {
        throw ConfigError(source + ": no [experiment] section found");
    }
    return m;
}

Manifest parse_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_manifest_text(buf.str(), path);
}

std::string describe_experiment(const std::string& name) {
    if (!is_registered(name)) {
        std::string all;
        for (const auto& n : experiment_registry()) {
            if (!all.empty()) all += ", ";
            all += n;
        }
        throw ConfigError("unknown experiment '" + name + "'; known: " + all);
    }
    std::ostringstream out;
    out << name << "\n";
    auto line = [&](const std::string& s) { out << "  " << s << "\n"; };
    if (name == "theorem-a" || name == "theorem-1.1") {
        line("Claim: P(all N legs reach height L by n = (c L N ln N)^2)");
        line("tends to p(c) = P(|Z| > 1/c) as N grows; p(1) ~ 0.3173.");
        line("Keys: legs=200, scales=0.5,1,2, replications=1000,");
        if (name == "theorem-a") {
            line("      engine=rao-blackwell, tolerance=0.05 (L fixed at 1).");
        } else {
            line("      height=1, threshold=1, engine=rao-blackwell,");
            line("      tolerance=0.05.");
        }
        line("Check: every estimate within tolerance of its target.");
    } else if (name == "theorem-1.2" || name == "theorem-1.5") {
        line("Claim: with a diverging scale f(N) = ln ln N the probability");
        if (name == "theorem-1.5") {
            line("of k visits at height L on every leg tends to 1.");
            line("Keys: legs_grid=50,100,200,400, height=1, threshold=2,");
        } else {
            line("of reaching height L on every leg tends to 1.");
            line("Keys: legs_grid=50,100,200,400, height=1, threshold=1,");
        }
        line("      replications=1000, engine=rao-blackwell, endpoint=0.9.");
        line("Check: the largest-N estimate exceeds the endpoint value.");
        line("Note: ln ln N grows so slowly that desk-scale N stays far");
        line("from the limit; treat the check as a trend probe.");
    } else if (name == "theorem-1.3") {
        line("Claim: with a vanishing scale f(N) = 1/ln ln N the");
        line("probability of reaching height L on every leg tends to 0.");
        line("Keys: legs_grid=50,100,200,400, height=1, threshold=1,");
        line("      replications=1000, engine=rao-blackwell, endpoint=0.1.");
        line("Check: the largest-N estimate is below the endpoint value.");
    } else if (name == "theorem-1.4") {
        line("Claim: P(every leg visited >= k times at height L by");
        line("n = (c L N ln N)^2) tends to p(c) = P(|Z| > 1/c).");
        line("Keys: legs=200, height=1, threshold=2, scales=0.5,1,2,");
        line("      replications=1000, engine=rao-blackwell, tolerance=0.07.");
        line("Check: every estimate within tolerance of its target.");
    } else if (name == "theorem-1.6") {
        line("Claim: limsup of min over legs of the max height, normalized");
        line("by sqrt(2 n ln ln n), equals 1/(2K-1) for K legs.");
        line("Keys: legs=2, steps=16777216, band_low=0.3, band_high=1.6.");
        line("Check: the final running max lies in (band_low, band_high)");
        line("times 1/(2K-1). The almost-sure limit itself is out of reach");
        line("at any finite n; the band is a sanity corridor.");
    } else if (name == "lemma-3.2") {
        line("Claim: |zeta(L,n) - xi(0,n)/L| >= 4 n^{1/4} (ln n)^{3/4} has");
        line("probability at most 2/n.");
        line("Keys: steps_grid=16384,65536,262144, heights=2,8,");
        line("      replications=1000.");
        line("Check: each empirical frequency <= 2/n plus sampling slack.");
    } else if (name == "erdos-renyi") {
        line("Claim: with N urns and N ln N + (m-1) N ln ln N + N x balls,");
        line("P(every urn holds >= m balls) tends to exp(-exp(-x)/(m-1)!).");
        line("Keys: urns=10000, threshold=1, x_grid=-1,0,1,2,");
        line("      tolerance=0.01 (0.02 when threshold > 1).");
        line("Check: exact finite-N coverage within tolerance of the limit.");
    } else if (name == "hoeffding") {
        line("Claim: P(|S_j - E S_j| >= k x) <= 2 exp(-2 k x^2) for j <= k");
        line("Bernoulli summands, including the padded j < k case.");
        line("Keys: horizons=100,1000,10000, deviations=0.05,0.1,0.2,");
        line("      replications=2000, p=0.5.");
        line("Check: empirical frequency below bound plus sampling slack.");
    } else if (name == "strassen-zigzag") {
        line("Claims: the K-peak zigzag has Dirichlet energy exactly 1 and");
        line("K maxima of height 1/(2K-1); equal segment lengths a/(2K-1)");
        line("minimize the energy alpha^2 sum 1/x_i, giving");
        line("alpha^2 (2K-1)^2 / a.");
        line("Keys: peaks_grid=1..10, support=1.");
        line("Check: energy within 1e-12 of 1, optimizer gap within 1e-9.");
    }
    return out.str();
}

RunResult run_manifest(const Manifest& manifest, const RunOptions& options) {
    Manifest m = manifest;
    for (const auto& [key, value] : options.overrides) m.values[key] = value;

    Params seed_peek(m);
    std::uint64_t seed =
        static_cast<std::uint64_t>(seed_peek.get_i64("seed", 1));
    if (options.has_seed_override) seed = options.seed_override;

    auto strip_common = [&](Params& p) {
        // consume keys handled here so drivers see only their own
        (void)p.get_i64("seed", 1);
        (void)p.get_str("output", "");
    };

    // dry pass: budgets and key validation before any simulation
    {
        Params p(m);
        strip_common(p);
        DriverOutput probe =
            dispatch(m.experiment, p, seed, options.workers, true);
        if (probe.step_budget > kHardBudget) {
            throw ResourceError("configuration implies " +
                                fmt_g(probe.step_budget) +
                                " steps, over the 1e11 ceiling");
        }
        if (probe.step_budget > kConfirmThreshold && !options.assume_yes) {
            if (!options.confirm || !options.confirm(probe.step_budget)) {
                throw ConfigError("configuration implies " +
                                  fmt_g(probe.step_budget) +
                                  " steps; rerun with --yes to proceed");
            }
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    Params p(m);
    strip_common(p);
    DriverOutput out = dispatch(m.experiment, p, seed, options.workers, false);
    const auto t1 = std::chrono::steady_clock::now();

    Params naming(m);
    std::string csv_name = naming.get_str("output", m.experiment + ".csv");
    std::string dir = options.output_dir;
    if (!dir.empty() && dir.back() != '/') dir += '/';
    const std::string csv_path = dir + csv_name;
    const std::string meta_path = csv_path + ".meta.json";

    {
        std::ofstream csv(csv_path);
        if (!csv) throw ConfigError("cannot write '" + csv_path + "'");
        for (std::size_t i = 0; i < out.table.header.size(); ++i) {
            if (i) csv << ',';
            csv << out.table.header[i];
        }
        csv << '\n';
        for (const auto& row : out.table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) csv << ',';
                csv << row[i];
            }
            csv << '\n';
        }
    }

    RunResult result;
    result.csv_path = csv_path;
    result.meta_path = meta_path;
    result.rows = static_cast<std::int64_t>(out.table.rows.size());
    result.wall_seconds =
        std::chrono::duration<double>(t1 - t0).count();
    result.check_performed = options.check;
    result.check_passed = !options.check || out.check_passed;
    if (options.check) result.check_messages = out.check_messages;

    nlohmann::json meta;
    meta["experiment"] = m.experiment;
    meta["seed"] = seed;
    meta["version"] = kVersion;
    meta["rng"] = kRngAlgorithm;
    meta["workers"] = options.workers;
    meta["rows"] = result.rows;
    meta["wall_seconds"] = result.wall_seconds;
    meta["csv"] = csv_path;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [key, value] : m.values) cfg[key] = value;
    meta["config"] = cfg;
    std::ofstream mf(meta_path);
    if (!mf) throw ConfigError("cannot write '" + meta_path + "'");
    mf << meta.dump(2) << '\n';

    return result;
}

PlotSeries emit_plot_data(const std::string& csv_path,
                          const std::string& experiment) {
    const PlotMapping map = plot_mapping(experiment);
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open '" + csv_path + "'");
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("'" + csv_path + "' is empty, not a run CSV");
    }
    const auto header = parse_csv_line(line);
    auto column = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return header.size();
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::vector<std::string> wanted = {map.x, map.estimate, map.ci_low,
                                             map.ci_high, map.target};
    std::vector<std::size_t> idx;
    std::vector<std::string> missing;
    for (const auto& name : wanted) {
        const std::size_t i = column(name);
        if (i == header.size()) missing.push_back(name);
        idx.push_back(i);
    }
    if (!missing.empty()) {
        std::string have;
        for (const auto& h : header) {
            if (!have.empty()) have += ", ";
            have += h;
        }
        std::string want;
        for (const auto& w : missing) {
            if (!want.empty()) want += ", ";
            want += w;
        }
        throw ConfigError("schema mismatch for '" + experiment +
                          "': missing columns [" + want + "], CSV has [" +
                          have + "]");
    }

    PlotSeries series;
    series.columns = {"x", "estimate", "ci_low", "ci_high", "target"};
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = parse_csv_line(line);
        std::vector<double> row;
        for (std::size_t i : idx) {
            if (i >= cells.size()) {
                throw ConfigError("short row in '" + csv_path + "'");
            }
            try {
                row.push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw ConfigError("non-numeric cell '" + cells[i] + "' in '" +
                                  csv_path + "'");
            }
        }
        series.rows.push_back(std::move(row));
    }
    if (series.rows.empty()) {
        series.warning = "no data rows in '" + csv_path + "'";
    }
    return series;
}

std::string format_plot_data(const PlotSeries& series) {
    std::ostringstream out;
    for (std::size_t i = 0; i < series.columns.size(); ++i) {
        if (i) out << '\t';
        out << series.columns[i];
    }
    out << '\n';
    for (const auto& row : series.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << '\t';
            out << fmt_g(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace spiderlab
