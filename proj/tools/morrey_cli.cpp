// Command-line front end: subcommand flags are merged over an optional json
// experiment document, then handed to the library runner.  Exit codes:
// 0 all verdicts passed, 1 a verdict failed or a quantity diverged,
// 2 bad configuration (unknown keys, infeasible exponents, bad flags).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "morrey/config.hpp"
#include "morrey/errors.hpp"

using nlohmann::json;

namespace {

json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw morrey::ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw morrey::ConfigError("config file '" + path + "': " + e.what());
    }
}

std::vector<double> split_numbers(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw morrey::ConfigError("bad number '" + tok + "' in --alphas");
        }
    }
    if (out.empty()) throw morrey::ConfigError("--alphas must list numbers");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bessel-Riesz kernel norms, Morrey norms, and convolution "
                 "inequality checks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = ".";
    int refine = 1;
    int jobs = 1;
    app.add_option("--config", config_path, "json experiment document");
    app.add_option("--out", out_dir, "output directory (report.json, table.csv)");
    app.add_option("--refine", refine, "discretization multiplier (>= 1)");
    app.add_option("--jobs", jobs, "worker threads for independent sub-runs");

    auto* c_kernel = app.add_subcommand(
        "kernel-norm", "kernel norm in a Lebesgue or Morrey space");
    double alpha = 0.0, gamma = 0.0, s = 0.0, t = 0.0;
    int dim = 1;
    bool force_search = false;
    auto* o_alpha = c_kernel->add_option("--alpha", alpha, "kernel order");
    auto* o_gamma = c_kernel->add_option("--gamma", gamma, "decay exponent");
    auto* o_dim = c_kernel->add_option("--dim", dim, "ambient dimension");
    auto* o_s = c_kernel->add_option("--s", s, "first Morrey exponent");
    auto* o_t = c_kernel->add_option("--t", t, "second (or Lebesgue) exponent");
    auto* o_force = c_kernel->add_flag("--force-search", force_search,
                                       "lattice search even when a closed "
                                       "form exists");

    auto* c_morrey = app.add_subcommand(
        "morrey-norm", "Morrey norm of a configured field (needs --config)");
    auto* c_apply = app.add_subcommand(
        "apply", "convolve a configured field with the kernel (needs --config)");

    auto* c_verify = app.add_subcommand(
        "verify", "run a fixed inequality instance and report the verdict");
    std::string inequality = "2.3";
    auto* o_ineq = c_verify->add_option(
        "--theorem", inequality, "inequality label: young, 2.2, 2.3, 3.1, all");

    auto* c_sweep = app.add_subcommand(
        "sweep", "kernel norm and lower-bound ratio across small alpha");
    std::string alphas_csv;
    double p1 = 1.0, sweep_gamma = 0.0;
    int sweep_dim = 1;
    auto* o_alphas = c_sweep->add_option("--alphas", alphas_csv,
                                         "comma-separated alpha list");
    auto* o_p1 = c_sweep->add_option("--p1", p1, "first exponent");
    auto* o_sdim = c_sweep->add_option("--dim", sweep_dim, "ambient dimension");
    auto* o_sgamma = c_sweep->add_option("--gamma", sweep_gamma, "decay exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json doc = config_path.empty() ? json::object()
                                       : load_document(config_path);
        if (!doc.is_object())
            throw morrey::ConfigError("config root must be an object");

        if (c_kernel->parsed()) {
            doc["command"] = "kernel-norm";
            if (!doc.contains("kernel")) doc["kernel"] = json::object();
            if (o_alpha->count()) doc["kernel"]["alpha"] = alpha;
            if (o_gamma->count()) doc["kernel"]["gamma"] = gamma;
            if (o_dim->count()) doc["kernel"]["dim"] = dim;
            if (o_s->count()) doc["s"] = s;
            if (o_t->count()) doc["t"] = t;
            if (o_force->count()) doc["force_search"] = force_search;
        } else if (c_morrey->parsed()) {
            doc["command"] = "morrey-norm";
        } else if (c_apply->parsed()) {
            doc["command"] = "apply";
        } else if (c_verify->parsed()) {
            doc["command"] = "verify";
            if (o_ineq->count() || !doc.contains("inequality"))
                doc["inequality"] = inequality;
        } else if (c_sweep->parsed()) {
            doc["command"] = "sweep";
            if (o_alphas->count()) doc["alphas"] = split_numbers(alphas_csv);
            if (o_p1->count()) doc["p1"] = p1;
            if (o_sdim->count()) doc["dim"] = sweep_dim;
            if (o_sgamma->count()) doc["gamma"] = sweep_gamma;
        }

        morrey::ExperimentConfig cfg = morrey::parse_config(doc);
        morrey::RunOptions opts;
        opts.out_dir = out_dir;
        opts.refine = refine;
        opts.jobs = jobs;
        return morrey::run_config(cfg, opts);
    } catch (const morrey::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const morrey::InfeasibleExponentError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
