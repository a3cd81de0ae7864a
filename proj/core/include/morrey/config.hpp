#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "morrey/bounds.hpp"

namespace morrey {

struct RunOptions {
    std::string out_dir = ".";
    int refine = 1; // global discretization multiplier (search lattices, quadrature)
    int jobs = 1;   // worker threads for independent sub-runs
};

// A parsed experiment document.  Validation is eager and strict: unknown keys
// and malformed values raise ConfigError at parse time, never at run time.
// config_to_json produces the canonical form, which parses back to an
// identical configuration (sugar spellings like {"kind":"power","q":...}
// canonicalise to the exponent form).
struct ExperimentConfig {
    std::string command; // kernel-norm | morrey-norm | apply | verify | sweep

    KernelParams kernel{0.5, 0.0, 1}; // kernel-norm, apply

    // kernel-norm: ||K||_{L^{s,t}} when s is present, ||K||_{L^t} otherwise.
    std::optional<double> s;
    std::optional<double> t;
    bool force_search = false;

    // morrey-norm
    std::optional<double> p;
    std::optional<ShapeFunction> phi;

    // morrey-norm, apply: built field plus its canonical description
    std::optional<RadialField> radial_field;
    std::optional<GridField> grid_field;
    nlohmann::json field_desc;

    // apply
    std::vector<double> eval_radii;   // empty: library default lattice
    std::string grid_mode = "auto";   // auto | direct | fast

    // verify
    std::string inequality = "2.3"; // young | 2.2 | 2.3 | 3.1 | all

    // sweep
    std::vector<double> alphas;
    double p1 = 1.0;
    int dim = 1;
    double gamma = 0.0;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

nlohmann::json shape_to_json(const ShapeFunction& phi);
ShapeFunction parse_shape(const nlohmann::json& j, int dim);

// Runs the experiment and writes report.json and table.csv (plus profile.csv
// when a radial profile is produced) under opts.out_dir.  Returns the process
// exit code: 0 every verdict passed, 1 a verdict failed or a requested
// quantity diverged.  Configuration and exponent errors propagate as
// exceptions; the command line maps them to exit code 2.
int run_config(const ExperimentConfig& cfg, const RunOptions& opts);

} // namespace morrey
