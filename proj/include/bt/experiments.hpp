#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bt/lp_exponent.hpp"

namespace bt::expr {

using ordered_json = nlohmann::ordered_json;

// One experiment invocation.  Every runner reads only the fields it needs;
// default_config(id) fills the values the acceptance gate assumes.
struct ExperimentConfig {
    std::string experiment;
    int n = 1;
    std::vector<int> N_values;
    std::vector<LpExponent> p_values;
    double E = 0.5;           // window center
    double C = 1.0;           // window half-width scale, C/N around E
    int alpha = 1;            // repeated-entry count, symbol power, or level cap
    int order = 20;           // total degree for exhaustive index sweeps
    int cap = 8;              // per-entry bound for index boxes
    int x_max = 200;          // profile range for convexity scans
    int seeds = 100;          // quasimode draws per N
    std::uint64_t seed0 = 1;  // base seed, mixed per draw
    std::string kernel = "fejer";
    double radius = 1.0;
    int grid_pts = 2001;
    double tol_slope = 0.05;
    double tol_rel = 1e-6;
};

// Log-log plot data; points are (log10 N, log10 value).
struct PlotPoint {
    double x, y;
};

struct PlotSeries {
    std::string label;
    std::vector<PlotPoint> pts;
    bool has_fit = false;
    double fit_slope = 0.0, fit_intercept10 = 0.0;
    bool has_target = false;
    double target_slope = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::string claim;
    ordered_json config;
    std::vector<ordered_json> rows;
    std::vector<ordered_json> fits;
    bool pass = true;
    std::vector<PlotSeries> plots;
    double runtime_sec = 0.0;
};

const std::vector<std::string>& experiment_ids();
const std::string& experiment_claim(const std::string& id);

// Acceptance-scale parameters for the experiment.
ExperimentConfig default_config(const std::string& id);

// Smaller parameters exercising the same code paths (used by the determinism
// cross-thread-count comparison to keep it affordable).
ExperimentConfig reduced_config(const std::string& id);

// Runs the experiment; cells are distributed over thread_count() workers and
// assembled in a fixed order, so the payload is identical for any count.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// "a:b:step" (inclusive ends) or a comma-separated list.
std::vector<int> parse_int_list(const std::string& s);
// Comma-separated exponents; "inf" allowed.
std::vector<LpExponent> parse_p_list(const std::string& s);

// Applies the fields present in j on top of base (flags/config-file merging).
ExperimentConfig config_from_json(const ordered_json& j, ExperimentConfig base);
ordered_json config_to_json(const ExperimentConfig& cfg);

// --- emit.cpp ---

// include_meta adds version and wall-clock fields; the determinism comparison
// omits them.
ordered_json report_to_json(const ExperimentReport& r, bool include_meta);
std::string report_csv(const ExperimentReport& r);
std::string report_svg(const ExperimentReport& r);

// Writes <dir>/<experiment>.<ext> for each requested format in
// {"json","csv","svg"}; creates the directory; returns the paths written.
std::vector<std::string> write_report(const ExperimentReport& r, const std::string& dir,
                                      const std::vector<std::string>& formats);

const char* report_schema_json();
const char* version_string();

}  // namespace bt::expr
