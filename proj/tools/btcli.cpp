// Command-line front end for the experiment catalog. Each experiment checks
// one numerical claim and writes a JSON/CSV/SVG report; the exit code says
// whether every asserted fit or tolerance held.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bt/experiments.hpp"
#include "bt/parallel.hpp"

namespace expr = bt::expr;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

int run_one(expr::ExperimentConfig cfg, const std::string& out_dir,
            const std::vector<std::string>& formats) {
    std::cout << cfg.experiment << ": " << expr::experiment_claim(cfg.experiment) << "\n";
    auto rep = expr::run_experiment(cfg);
    auto paths = expr::write_report(rep, out_dir, formats);
    for (const auto& f : rep.fits) {
        std::cout << "  fit " << f.dump() << "\n";
    }
    std::cout << "  rows=" << rep.rows.size() << " runtime=" << rep.runtime_sec << "s -> "
              << (rep.pass ? "pass" : "FAIL") << "\n";
    for (const auto& p : paths) std::cout << "  wrote " << p << "\n";
    return rep.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Berezin-Toeplitz quasimode experiments"};

    std::string experiment, config_path, N_spec, p_spec, out_dir = "out", format = "json";
    int n = 0, alpha = 0, seeds = 0;
    double E = 0, C = 0, tol_slope = 0, tol_rel = 0;
    bool list = false;

    app.add_flag("--list", list, "List experiment ids and claims, then exit");
    app.add_option("--experiment", experiment, "Experiment id from the catalog, or 'all'");
    app.add_option("--config", config_path, "JSON config file; flags override its entries");
    app.add_option("--n", n, "Complex dimension");
    app.add_option("--N", N_spec, "Quantization levels: 'a:b[:step]' or comma list");
    app.add_option("--p", p_spec, "Comma list of exponents; 'inf' allowed");
    app.add_option("--E", E, "Window center energy");
    app.add_option("--C", C, "Window half-width scale (window is [E - C/N, E + C/N])");
    app.add_option("--alpha", alpha, "Family parameter (repeated entries, symbol power, or level cap)");
    app.add_option("--seeds", seeds, "Random quasimode draws per N");
    app.add_option("--out", out_dir, "Output directory for reports");
    app.add_option("--format", format, "Comma list of output formats: json,csv,svg");
    app.add_option("--tol-slope", tol_slope, "Tolerance on fitted slopes");
    app.add_option("--tol-rel", tol_rel, "Relative tolerance on value checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (list) {
            for (const auto& id : expr::experiment_ids())
                std::cout << id << ": " << expr::experiment_claim(id) << "\n";
            return 0;
        }
        if (experiment.empty()) {
            std::cerr << "error: --experiment is required (or --list)\n";
            return 1;
        }

        auto formats = split_csv(format);
        if (formats.empty()) {
            std::cerr << "error: empty --format\n";
            return 1;
        }

        std::vector<std::string> ids;
        if (experiment == "all")
            ids = expr::experiment_ids();
        else
            ids.push_back(experiment);

        std::cout << "threads: " << bt::thread_count() << "\n";
        int worst = 0;
        for (const auto& id : ids) {
            expr::ExperimentConfig cfg = expr::default_config(id);
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) {
                    std::cerr << "error: cannot read config " << config_path << "\n";
                    return 1;
                }
                expr::ordered_json j = expr::ordered_json::parse(in);
                j.erase("experiment");  // the id comes from --experiment
                cfg = expr::config_from_json(j, cfg);
            }
            if (app.count("--n")) cfg.n = n;
            if (app.count("--N")) cfg.N_values = expr::parse_int_list(N_spec);
            if (app.count("--p")) cfg.p_values = expr::parse_p_list(p_spec);
            if (app.count("--E")) cfg.E = E;
            if (app.count("--C")) cfg.C = C;
            if (app.count("--alpha")) cfg.alpha = alpha;
            if (app.count("--seeds")) cfg.seeds = seeds;
            if (app.count("--tol-slope")) cfg.tol_slope = tol_slope;
            if (app.count("--tol-rel")) cfg.tol_rel = tol_rel;

            worst = std::max(worst, run_one(cfg, out_dir, formats));
        }
        return worst;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
