#include "morrey/config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <thread>

#include "morrey/errors.hpp"
#include "morrey/report_io.hpp"

namespace morrey {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Strict document access: unknown keys are hard errors, wrong types name the
// key, required keys name the section they are missing from.

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

const json& require_key(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError(std::string("missing key '") + key + "' in " + where);
    return *it;
}

double as_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    return v.get<double>();
}

double number_at(const json& obj, const char* key, const std::string& where) {
    return as_number(require_key(obj, key, where), "'" + std::string(key) + "'");
}

double number_or(const json& obj, const char* key, double dflt) {
    auto it = obj.find(key);
    return it == obj.end() ? dflt : as_number(*it, "'" + std::string(key) + "'");
}

int int_or(const json& obj, const char* key, int dflt) {
    auto it = obj.find(key);
    if (it == obj.end()) return dflt;
    if (!it->is_number_integer())
        throw ConfigError("'" + std::string(key) + "' must be an integer");
    return it->get<int>();
}

bool bool_or(const json& obj, const char* key, bool dflt) {
    auto it = obj.find(key);
    if (it == obj.end()) return dflt;
    if (!it->is_boolean())
        throw ConfigError("'" + std::string(key) + "' must be a boolean");
    return it->get<bool>();
}

std::string string_at(const json& obj, const char* key, const std::string& where) {
    const json& v = require_key(obj, key, where);
    if (!v.is_string())
        throw ConfigError("'" + std::string(key) + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& what) {
    if (!v.is_array() || v.empty())
        throw ConfigError(what + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (const json& e : v) out.push_back(as_number(e, what + " entry"));
    return out;
}

// ---------------------------------------------------------------------------
// Section parsers.

KernelParams parse_kernel(const json& j) {
    if (!j.is_object()) throw ConfigError("'kernel' must be an object");
    expect_keys(j, {"alpha", "gamma", "dim"}, "kernel");
    KernelParams k;
    k.alpha = number_at(j, "alpha", "kernel");
    k.gamma = number_or(j, "gamma", 0.0);
    k.dim = int_or(j, "dim", 1);
    k.validate();
    return k;
}

json kernel_to_json(const KernelParams& k) {
    return {{"alpha", k.alpha}, {"gamma", k.gamma}, {"dim", k.dim}};
}

RadialSpec parse_radial_spec(const json& j) {
    if (!j.is_object()) throw ConfigError("'radial' must be an object");
    expect_keys(j, {"dim", "r_lo", "r_hi", "per_decade"}, "radial spec");
    RadialSpec s;
    s.dim = int_or(j, "dim", 1);
    s.r_lo = number_or(j, "r_lo", s.r_lo);
    s.r_hi = number_or(j, "r_hi", s.r_hi);
    s.per_decade = int_or(j, "per_decade", s.per_decade);
    return s;
}

json radial_spec_to_json(const RadialSpec& s) {
    return {{"dim", s.dim}, {"r_lo", s.r_lo}, {"r_hi", s.r_hi},
            {"per_decade", s.per_decade}};
}

GridSpec parse_grid_spec(const json& j) {
    if (!j.is_object()) throw ConfigError("'grid' must be an object");
    expect_keys(j, {"dim", "half_width", "n_axis"}, "grid spec");
    GridSpec s;
    s.dim = int_or(j, "dim", 1);
    s.half_width = number_or(j, "half_width", s.half_width);
    s.n_axis = int_or(j, "n_axis", s.n_axis);
    return s;
}

json grid_spec_to_json(const GridSpec& s) {
    return {{"dim", s.dim}, {"half_width", s.half_width}, {"n_axis", s.n_axis}};
}

// Builds the requested field and records its canonical description.
void parse_field(const json& j, ExperimentConfig& cfg) {
    if (!j.is_object()) throw ConfigError("'field' must be an object");
    const std::string family = string_at(j, "family", "field");
    std::string rep = "radial";
    if (j.contains("representation")) rep = string_at(j, "representation", "field");
    if (rep != "radial" && rep != "grid")
        throw ConfigError("'representation' must be 'radial' or 'grid'");

    std::set<std::string> allowed = {"family", "representation"};
    allowed.insert(rep == "radial" ? "radial" : "grid");
    if (family == "ball-indicator") {
        allowed.insert("R");
        if (rep == "grid") allowed.insert("center");
    } else if (family == "phi-profile") {
        allowed.insert("phi");
    } else if (family == "gaussian") {
        allowed.insert("sigma");
    } else if (family == "power-bump") {
        allowed.insert("beta");
        allowed.insert("R");
    } else if (family == "custom-table") {
        allowed.insert("radii");
        allowed.insert("values");
    } else {
        throw ConfigError("unknown field family '" + family + "'");
    }
    expect_keys(j, allowed, "field");

    json canon = {{"family", family}, {"representation", rep}};
    if (rep == "radial") {
        RadialSpec rs = parse_radial_spec(j.value("radial", json::object()));
        canon["radial"] = radial_spec_to_json(rs);
        if (family == "ball-indicator") {
            double R = number_at(j, "R", "field");
            canon["R"] = R;
            cfg.radial_field = build_radial_indicator(rs, R);
        } else if (family == "phi-profile") {
            ShapeFunction phi = parse_shape(require_key(j, "phi", "field"), rs.dim);
            canon["phi"] = shape_to_json(phi);
            cfg.radial_field = build_radial_shape_profile(rs, phi);
        } else if (family == "gaussian") {
            double sigma = number_or(j, "sigma", 1.0);
            canon["sigma"] = sigma;
            cfg.radial_field = build_radial_gaussian(rs, sigma);
        } else if (family == "power-bump") {
            double beta = number_at(j, "beta", "field");
            double R = number_or(j, "R", 1.0);
            canon["beta"] = beta;
            canon["R"] = R;
            cfg.radial_field = build_radial_power_bump(rs, beta, R);
        } else { // custom-table
            std::vector<double> r = number_list(require_key(j, "radii", "field"),
                                                "'radii'");
            std::vector<double> v = number_list(require_key(j, "values", "field"),
                                                "'values'");
            canon["radii"] = r;
            canon["values"] = v;
            cfg.radial_field = RadialField(rs.dim, std::move(r), std::move(v));
        }
    } else {
        GridSpec gs = parse_grid_spec(j.value("grid", json::object()));
        canon["grid"] = grid_spec_to_json(gs);
        if (family == "ball-indicator") {
            std::vector<double> center(static_cast<size_t>(gs.dim), 0.0);
            if (j.contains("center"))
                center = number_list(j.at("center"), "'center'");
            if (static_cast<int>(center.size()) != gs.dim)
                throw ConfigError("'center' length must equal the grid dim");
            double R = number_at(j, "R", "field");
            canon["center"] = center;
            canon["R"] = R;
            cfg.grid_field = build_grid_indicator(gs, center, R);
        } else if (family == "gaussian") {
            double sigma = number_or(j, "sigma", 1.0);
            canon["sigma"] = sigma;
            cfg.grid_field = build_grid_gaussian(gs, sigma);
        } else {
            throw ConfigError("field family '" + family +
                              "' is not available as a grid field");
        }
    }
    cfg.field_desc = std::move(canon);
}

int field_dim(const ExperimentConfig& cfg) {
    return cfg.radial_field ? cfg.radial_field->dim() : cfg.grid_field->dim();
}

// ---------------------------------------------------------------------------
// Report serialization.

const char* method_name(NormEstimate::Method m) {
    switch (m) {
        case NormEstimate::Method::ClosedForm: return "closed-form";
        case NormEstimate::Method::Quadrature: return "quadrature";
        default: return "ball-search";
    }
}

json norm_json(const NormEstimate& e) {
    return {{"value", e.value},
            {"method", method_name(e.method)},
            {"error_indicator", e.error_indicator},
            {"argmax_center", e.argmax_center},
            {"argmax_radius", e.argmax_radius},
            {"radius_edge_pinned", e.radius_edge_pinned},
            {"offcenter_argmax", e.offcenter_argmax},
            {"centers", e.centers},
            {"radii", e.radii}};
}

json hyps_json(const std::vector<HypothesisCheck>& hs) {
    json a = json::array();
    for (const HypothesisCheck& h : hs)
        a.push_back({{"name", h.name},
                     {"holds", h.holds},
                     {"constant", h.constant},
                     {"note", h.note}});
    return a;
}

json exps_json(const SolvedExponents& e) {
    json j = {{"p1", e.p1},       {"s", e.s},
              {"t", e.t},         {"p2", e.p2},
              {"s_dual", e.s_dual}, {"t_dual", e.t_dual},
              {"q2_infeasible", e.q2_infeasible}};
    j["q1"] = e.q1 ? json(*e.q1) : json();
    j["q2"] = e.q2 ? json(*e.q2) : json();
    return j;
}

json members_json(const std::vector<MemberResult>& ms) {
    json a = json::array();
    for (const MemberResult& m : ms)
        a.push_back({{"name", m.name},
                     {"lambda", m.lambda},
                     {"lhs", m.lhs},
                     {"rhs", m.rhs},
                     {"ratio", m.ratio},
                     {"vacuous", m.vacuous},
                     {"note", m.note}});
    return a;
}

json upper_json(const UpperBoundReport& r) {
    return {{"kernel", kernel_to_json(r.kernel)},
            {"exponents", exps_json(r.exps)},
            {"phi", r.phi_desc},
            {"psi", r.psi_desc},
            {"hypotheses", hyps_json(r.hypotheses)},
            {"kernel_norm_st", norm_json(r.kernel_norm)},
            {"members", members_json(r.members)},
            {"empirical_constant", r.max_ratio},
            {"dilation_spread", r.dilation_spread},
            {"pass", r.pass}};
}

json lower_json(const LowerBoundReport& r) {
    return {{"kernel", kernel_to_json(r.kernel)},
            {"exponents", exps_json(r.exps)},
            {"phi", r.phi_desc},
            {"hypotheses", hyps_json(r.hypotheses)},
            {"f0_norm", norm_json(r.f0_norm)},
            {"f0_bracket", json::array({r.bracket_lo, r.bracket_hi})},
            {"if0_norm", norm_json(r.if0_norm)},
            {"rho_k_norm", norm_json(r.rho_k_norm)},
            {"kernel_norm_p1t", norm_json(r.kernel_norm_p1t)},
            {"ratio0", r.ratio0},
            {"c_pointwise", r.c_pointwise},
            {"c_norm", r.c_norm},
            {"c_lower", r.c_lower},
            {"pass", r.pass}};
}

json two_json(const TwoSidedReport& r) {
    return {{"kernel", kernel_to_json(r.kernel)},
            {"exponents", exps_json(r.exps)},
            {"phi", r.phi_desc},
            {"psi", r.psi_desc},
            {"hypotheses", hyps_json(r.hypotheses)},
            {"kernel_norm_p1t", r.kernel_norm_p1t},
            {"kernel_norm_st", r.kernel_norm_st},
            {"members", members_json(r.members)},
            {"norm_estimate", r.norm_estimate},
            {"dilation_spread", r.dilation_spread},
            {"c4", r.c4},
            {"c5", r.c5},
            {"f0_chain", lower_json(r.f0)},
            {"pass", r.pass}};
}

// ---------------------------------------------------------------------------
// Verification instances.  One fixed, documented instance per inequality
// label; the labels are the vocabulary of the `verify` command and carry no
// meaning beyond selecting an instance below.

const char* kVerifyHeader =
    "inequality,member,lambda,n,alpha,gamma,p1,p2,q1,q2,s,t,p,q,phi,lhs,rhs,"
    "ratio,vacuous,pass,note";

std::string opt_num(const std::optional<double>& v) {
    return v ? format_sig12(*v) : "";
}

struct VerifyOutcome {
    json j;
    std::vector<std::string> rows;
    bool pass = false;
    std::string profile; // radial samples of the f0 convolution, when produced
};

VerifyOutcome verify_young(const SearchOptions&, const QuadratureOptions& qopt,
                           int refine) {
    const KernelParams k{0.5, 1.0, 1};
    const ShapeFunction phi = ShapeFunction::power(1, 2.0);
    const RadialSpec spec;
    const double delta = 0.05 / refine;
    const double tuples[3][2] = {{1.0, 1.0}, {1.0, 1.5}, {1.5, 1.5}};

    std::vector<CorpusMember> corpus = default_corpus(spec, phi);
    VerifyOutcome out;
    out.pass = true;
    json runs = json::array();
    for (const double* pt : {tuples[0], tuples[1], tuples[2]}) {
        YoungReport rep = young_report(corpus, k, pt[0], pt[1], delta, qopt);
        json jm = json::array();
        for (const YoungMember& m : rep.members) {
            jm.push_back({{"name", m.name},
                          {"lambda", m.lambda},
                          {"f_norm", m.f_norm},
                          {"conv_norm", m.conv_norm},
                          {"ratio", m.ratio},
                          {"vacuous", m.vacuous},
                          {"pass", m.pass},
                          {"note", m.note}});
            out.rows.push_back(csv_row(
                {"young", m.name, format_sig12(m.lambda), "1",
                 format_sig12(k.alpha), format_sig12(k.gamma), "", "", "", "",
                 "", format_sig12(rep.t), format_sig12(rep.p),
                 format_sig12(rep.q), phi.describe(), format_sig12(m.conv_norm),
                 format_sig12(rep.kernel_norm * m.f_norm),
                 format_sig12(m.ratio), m.vacuous ? "true" : "false",
                 m.pass ? "true" : "false", m.note}));
        }
        runs.push_back({{"p", rep.p},
                        {"t", rep.t},
                        {"q", rep.q},
                        {"delta", rep.delta},
                        {"kernel_norm", rep.kernel_norm},
                        {"max_ratio", rep.max_ratio},
                        {"members", jm},
                        {"pass", rep.pass}});
        out.pass = out.pass && rep.pass;
    }
    out.j = {{"inequality", "young"},
             {"kernel", kernel_to_json(k)},
             {"phi", phi.describe()},
             {"runs", runs},
             {"pass", out.pass}};
    return out;
}

VerifyOutcome verify_upper(const std::string& label, const SearchOptions& sopt) {
    // Power-shape instance of the upper convolution bound; the classical
    // label uses the ball-volume normalisation of the same shape.
    const KernelParams k{0.5, 0.0, 1};
    const double p1 = 1.0, s = 1.5, t = 2.0;
    const ShapeFunction phi = label == "2.2" ? ShapeFunction::classical(1, 2.0)
                                             : ShapeFunction::power(1, 2.0);
    const RadialSpec spec;
    std::vector<CorpusMember> corpus = default_corpus(spec, phi);
    UpperBoundReport rep = theorem_report(corpus, k, p1, s, t, phi, spec, sopt);

    VerifyOutcome out;
    out.pass = rep.pass;
    out.j = upper_json(rep);
    out.j["inequality"] = label;
    for (const MemberResult& m : rep.members)
        out.rows.push_back(csv_row(
            {label, m.name, format_sig12(m.lambda), "1", format_sig12(k.alpha),
             format_sig12(k.gamma), format_sig12(rep.exps.p1),
             format_sig12(rep.exps.p2), opt_num(rep.exps.q1),
             opt_num(rep.exps.q2), format_sig12(rep.exps.s),
             format_sig12(rep.exps.t), "", "", rep.phi_desc,
             format_sig12(m.lhs), format_sig12(m.rhs), format_sig12(m.ratio),
             m.vacuous ? "true" : "false", rep.pass ? "true" : "false",
             m.note}));
    return out;
}

VerifyOutcome verify_two_sided(const SearchOptions& sopt) {
    const KernelParams k{0.75, 1.0, 1};
    const double p1 = 1.0, s = 3.0, t = 3.5;
    const ShapeFunction phi = ShapeFunction::power(1, 2.0);
    const RadialSpec spec;
    std::vector<CorpusMember> corpus = default_corpus(spec, phi);
    TwoSidedReport rep = two_sided_report(phi, k, p1, s, t, corpus, spec, sopt);

    VerifyOutcome out;
    out.pass = rep.pass;
    out.j = two_json(rep);
    out.j["inequality"] = "3.1";
    for (const MemberResult& m : rep.members)
        out.rows.push_back(csv_row(
            {"3.1", m.name, format_sig12(m.lambda), "1", format_sig12(k.alpha),
             format_sig12(k.gamma), format_sig12(rep.exps.p1),
             format_sig12(rep.exps.p2), opt_num(rep.exps.q1),
             opt_num(rep.exps.q2), format_sig12(rep.exps.s),
             format_sig12(rep.exps.t), "", "", rep.phi_desc,
             format_sig12(m.lhs), format_sig12(m.rhs), format_sig12(m.ratio),
             m.vacuous ? "true" : "false", rep.pass ? "true" : "false",
             m.note}));
    if (rep.f0.if0) {
        std::string prof = "r,value\n";
        const RadialField& g = *rep.f0.if0;
        for (size_t i = 0; i < g.radii().size(); ++i)
            prof += format_sig12(g.radii()[i]) + "," +
                    format_sig12(g.values()[i]) + "\n";
        out.profile = std::move(prof);
    }
    return out;
}

void run_indexed(int jobs, int count, const std::function<void(int)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(static_cast<size_t>(count));
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                errs[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    int n = std::min(jobs, count);
    pool.reserve(static_cast<size_t>(n));
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace

// ---------------------------------------------------------------------------

ShapeFunction parse_shape(const json& j, int dim) {
    if (!j.is_object()) throw ConfigError("shape must be an object");
    const std::string kind = string_at(j, "kind", "shape");
    if (kind == "power") {
        expect_keys(j, {"kind", "q", "c"}, "shape");
        return ShapeFunction::power(dim, number_at(j, "q", "shape"),
                                    number_or(j, "c", 1.0));
    }
    if (kind == "power-exponent") {
        expect_keys(j, {"kind", "c", "a"}, "shape");
        return ShapeFunction::power_exponent(number_or(j, "c", 1.0),
                                             number_at(j, "a", "shape"));
    }
    if (kind == "classical") {
        expect_keys(j, {"kind", "q"}, "shape");
        return ShapeFunction::classical(dim, number_at(j, "q", "shape"));
    }
    if (kind == "table") {
        expect_keys(j, {"kind", "r", "phi"}, "shape");
        return ShapeFunction::table(number_list(require_key(j, "r", "shape"), "'r'"),
                                    number_list(require_key(j, "phi", "shape"),
                                                "'phi'"));
    }
    throw ConfigError("unknown shape kind '" + kind + "'");
}

json shape_to_json(const ShapeFunction& phi) {
    if (phi.is_power())
        return {{"kind", "power-exponent"}, {"c", phi.coeff()}, {"a", phi.exponent()}};
    return {{"kind", "table"}, {"r", phi.table_radii()}, {"phi", phi.table_values()}};
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    ExperimentConfig cfg;
    cfg.command = string_at(doc, "command", "config");

    if (cfg.command == "kernel-norm") {
        expect_keys(doc, {"command", "kernel", "s", "t", "force_search"},
                    "kernel-norm config");
        cfg.kernel = parse_kernel(require_key(doc, "kernel", "kernel-norm config"));
        cfg.t = number_at(doc, "t", "kernel-norm config");
        if (doc.contains("s")) cfg.s = number_at(doc, "s", "kernel-norm config");
        cfg.force_search = bool_or(doc, "force_search", false);
    } else if (cfg.command == "morrey-norm") {
        expect_keys(doc, {"command", "field", "p", "phi"}, "morrey-norm config");
        parse_field(require_key(doc, "field", "morrey-norm config"), cfg);
        cfg.p = number_at(doc, "p", "morrey-norm config");
        cfg.phi = parse_shape(require_key(doc, "phi", "morrey-norm config"),
                              field_dim(cfg));
    } else if (cfg.command == "apply") {
        expect_keys(doc, {"command", "field", "kernel", "radii", "mode"},
                    "apply config");
        parse_field(require_key(doc, "field", "apply config"), cfg);
        cfg.kernel = parse_kernel(require_key(doc, "kernel", "apply config"));
        if (cfg.kernel.dim != field_dim(cfg))
            throw ConfigError("kernel dim does not match the field dim");
        if (doc.contains("radii")) {
            if (!cfg.radial_field)
                throw ConfigError("'radii' applies only to radial fields");
            cfg.eval_radii = number_list(doc.at("radii"), "'radii'");
            std::sort(cfg.eval_radii.begin(), cfg.eval_radii.end());
            cfg.eval_radii.erase(
                std::unique(cfg.eval_radii.begin(), cfg.eval_radii.end()),
                cfg.eval_radii.end());
            for (double r : cfg.eval_radii)
                if (!(r > 0.0)) throw ConfigError("'radii' must be positive");
        }
        if (doc.contains("mode")) {
            if (!cfg.grid_field)
                throw ConfigError("'mode' applies only to grid fields");
            cfg.grid_mode = string_at(doc, "mode", "apply config");
            if (cfg.grid_mode != "auto" && cfg.grid_mode != "direct" &&
                cfg.grid_mode != "fast")
                throw ConfigError("'mode' must be auto, direct, or fast");
        }
    } else if (cfg.command == "verify") {
        expect_keys(doc, {"command", "inequality"}, "verify config");
        if (doc.contains("inequality"))
            cfg.inequality = string_at(doc, "inequality", "verify config");
        if (cfg.inequality != "young" && cfg.inequality != "2.2" &&
            cfg.inequality != "2.3" && cfg.inequality != "3.1" &&
            cfg.inequality != "all")
            throw ConfigError("'inequality' must be young, 2.2, 2.3, 3.1, or all");
    } else if (cfg.command == "sweep") {
        expect_keys(doc, {"command", "alphas", "p1", "dim", "gamma"}, "sweep config");
        cfg.alphas = number_list(require_key(doc, "alphas", "sweep config"),
                                 "'alphas'");
        cfg.p1 = number_or(doc, "p1", 1.0);
        cfg.dim = int_or(doc, "dim", 1);
        cfg.gamma = number_or(doc, "gamma", 0.0);
    } else {
        throw ConfigError("unknown command '" + cfg.command + "'");
    }
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j = {{"command", cfg.command}};
    if (cfg.command == "kernel-norm") {
        j["kernel"] = kernel_to_json(cfg.kernel);
        j["t"] = *cfg.t;
        if (cfg.s) j["s"] = *cfg.s;
        if (cfg.force_search) j["force_search"] = true;
    } else if (cfg.command == "morrey-norm") {
        j["field"] = cfg.field_desc;
        j["p"] = *cfg.p;
        j["phi"] = shape_to_json(*cfg.phi);
    } else if (cfg.command == "apply") {
        j["field"] = cfg.field_desc;
        j["kernel"] = kernel_to_json(cfg.kernel);
        if (!cfg.eval_radii.empty()) j["radii"] = cfg.eval_radii;
        if (cfg.grid_field && cfg.grid_mode != "auto") j["mode"] = cfg.grid_mode;
    } else if (cfg.command == "verify") {
        j["inequality"] = cfg.inequality;
    } else if (cfg.command == "sweep") {
        j["alphas"] = cfg.alphas;
        j["p1"] = cfg.p1;
        j["dim"] = cfg.dim;
        j["gamma"] = cfg.gamma;
    }
    return j;
}

int run_config(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (opts.refine < 1) throw ConfigError("--refine must be >= 1");
    if (opts.jobs < 1) throw ConfigError("--jobs must be >= 1");

    SearchOptions sopt;
    sopt.refine = opts.refine;
    QuadratureOptions qopt;
    qopt.rel_tol = 1e-8 / (double(opts.refine) * double(opts.refine));

    const RadialSpec default_spec;
    std::fprintf(stderr,
                 "resolved discretization: radial [%g, %g] at %d samples/decade, "
                 "refine %d, jobs %d\n",
                 default_spec.r_lo, default_spec.r_hi, default_spec.per_decade,
                 opts.refine, opts.jobs);

    json report;
    report["command"] = cfg.command;
    report["config"] = config_to_json(cfg);
    report["discretization"] = {{"refine", opts.refine},
                                {"jobs", opts.jobs},
                                {"quad_rel_tol", qopt.rel_tol},
                                {"radial_spec", radial_spec_to_json(default_spec)}};

    std::string table;
    std::string profile;
    bool pass = true;

    try {
        if (cfg.command == "kernel-norm") {
            RadialSpec rs = default_spec;
            rs.dim = cfg.kernel.dim;
            NormEstimate est =
                cfg.s ? kernel_morrey_norm(cfg.kernel, *cfg.s, *cfg.t, rs, sopt,
                                           cfg.force_search)
                      : kernel_lebesgue_norm(cfg.kernel, *cfg.t, qopt);
            report["result"] = norm_json(est);
            table = "alpha,gamma,dim,s,t,value,method,error_indicator\n";
            table += csv_row({format_sig12(cfg.kernel.alpha),
                              format_sig12(cfg.kernel.gamma),
                              std::to_string(cfg.kernel.dim), opt_num(cfg.s),
                              format_sig12(*cfg.t), format_sig12(est.value),
                              method_name(est.method),
                              format_sig12(est.error_indicator)}) +
                     "\n";
        } else if (cfg.command == "morrey-norm") {
            NormEstimate est = cfg.radial_field
                                   ? morrey_norm(*cfg.radial_field, *cfg.p,
                                                 *cfg.phi, sopt)
                                   : morrey_norm(*cfg.grid_field, *cfg.p,
                                                 *cfg.phi, sopt);
            report["result"] = norm_json(est);
            table = "p,phi,dim,value,method,error_indicator,argmax_radius,"
                    "radius_edge_pinned,offcenter_argmax\n";
            table += csv_row({format_sig12(*cfg.p), cfg.phi->describe(),
                              std::to_string(field_dim(cfg)),
                              format_sig12(est.value), method_name(est.method),
                              format_sig12(est.error_indicator),
                              format_sig12(est.argmax_radius),
                              est.radius_edge_pinned ? "true" : "false",
                              est.offcenter_argmax ? "true" : "false"}) +
                     "\n";
        } else if (cfg.command == "apply") {
            if (cfg.radial_field) {
                std::vector<double> rr = cfg.eval_radii, vv;
                if (rr.size() == 1) {
                    // A sampled-field result needs two points; a single probe
                    // is just a point evaluation.
                    vv.push_back(
                        apply_radial_at(*cfg.radial_field, cfg.kernel, rr[0], qopt));
                } else {
                    RadialField g =
                        apply_radial(*cfg.radial_field, cfg.kernel, rr, qopt);
                    rr = g.radii();
                    vv = g.values();
                }
                table = "r,value\n";
                double peak = 0.0;
                for (size_t i = 0; i < rr.size(); ++i) {
                    table += format_sig12(rr[i]) + "," + format_sig12(vv[i]) + "\n";
                    peak = std::max(peak, std::abs(vv[i]));
                }
                profile = table;
                report["result"] = {{"samples", rr.size()},
                                    {"r_lo", rr.front()},
                                    {"r_hi", rr.back()},
                                    {"peak", peak}};
            } else {
                GridConvMode mode = GridConvMode::Auto;
                if (cfg.grid_mode == "direct") mode = GridConvMode::Direct;
                if (cfg.grid_mode == "fast") mode = GridConvMode::Fast;
                GridField g = apply_grid(*cfg.grid_field, cfg.kernel, mode);
                // Center line along the first axis.
                int mid = g.n_axis() / 2;
                table = "x,value\n";
                double peak = 0.0;
                for (int ix = 0; ix < g.n_axis(); ++ix) {
                    double v = g.dim() >= 3   ? g.at(ix, mid, mid)
                               : g.dim() == 2 ? g.at(ix, mid)
                                              : g.at(ix);
                    table += format_sig12(g.coord(ix)) + "," + format_sig12(v) +
                             "\n";
                    peak = std::max(peak, std::abs(v));
                }
                profile = table;
                report["result"] = {{"n_axis", g.n_axis()},
                                    {"spacing", g.spacing()},
                                    {"peak", peak}};
            }
        } else if (cfg.command == "verify") {
            std::vector<std::string> labels;
            if (cfg.inequality == "all")
                labels = {"young", "2.2", "2.3", "3.1"};
            else
                labels = {cfg.inequality};
            std::vector<VerifyOutcome> outs(labels.size());
            run_indexed(opts.jobs, static_cast<int>(labels.size()), [&](int i) {
                const std::string& lb = labels[static_cast<size_t>(i)];
                if (lb == "young")
                    outs[static_cast<size_t>(i)] =
                        verify_young(sopt, qopt, opts.refine);
                else if (lb == "3.1")
                    outs[static_cast<size_t>(i)] = verify_two_sided(sopt);
                else
                    outs[static_cast<size_t>(i)] = verify_upper(lb, sopt);
            });
            table = std::string(kVerifyHeader) + "\n";
            json runs = json::array();
            for (const VerifyOutcome& o : outs) {
                runs.push_back(o.j);
                for (const std::string& row : o.rows) table += row + "\n";
                if (!o.profile.empty()) profile = o.profile;
                pass = pass && o.pass;
            }
            report["inequalities"] = runs;
        } else if (cfg.command == "sweep") {
            RadialSpec rs = default_spec;
            rs.dim = cfg.dim;
            SweepReport rep =
                alpha_sweep(cfg.alphas, cfg.p1, cfg.dim, cfg.gamma, rs, sopt);
            table = "alpha,t,closed,ball,ratio0\n";
            json rows = json::array();
            for (const SweepRow& r : rep.rows) {
                table += csv_row({format_sig12(r.alpha), format_sig12(r.t),
                                  format_sig12(r.closed), format_sig12(r.ball),
                                  format_sig12(r.ratio0)}) +
                         "\n";
                rows.push_back({{"alpha", r.alpha},
                                {"t", r.t},
                                {"closed", r.closed},
                                {"ball", r.ball},
                                {"ratio0", r.ratio0}});
            }
            report["result"] = {{"p1", rep.p1},
                                {"dim", rep.dim},
                                {"gamma", rep.gamma},
                                {"slope", rep.slope},
                                {"rows", rows}};
        } else {
            throw ConfigError("unknown command '" + cfg.command + "'");
        }
    } catch (const DivergenceError& e) {
        report["error"] = {{"type", "divergence"}, {"message", e.what()}};
        pass = false;
    } catch (const AliasingError& e) {
        report["error"] = {{"type", "aliasing"}, {"message", e.what()}};
        pass = false;
    }

    report["pass"] = pass;

    std::filesystem::create_directories(opts.out_dir);
    const std::filesystem::path out(opts.out_dir);
    write_text_file((out / "report.json").string(), dump_sorted_json(report));
    write_text_file((out / "table.csv").string(), table);
    if (!profile.empty())
        write_text_file((out / "profile.csv").string(), profile);
    return pass ? 0 : 1;
}

} // namespace morrey
