#include "sublab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>

#include "sublab/errors.hpp"
#include "sublab/special_functions.hpp"

namespace sublab::harness {

namespace {

using nlohmann::json;

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                               diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

std::string nearest(const std::string& word, std::initializer_list<const char*> candidates) {
    std::string best;
    std::size_t best_d = SIZE_MAX;
    for (const char* c : candidates) {
        const std::size_t d = edit_distance(word, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) {
            throw ConfigError(std::string(ctx) + ": unknown key \"" + it.key() +
                              "\" (did you mean \"" + nearest(it.key(), allowed) + "\"?)");
        }
    }
}

const json& get_field(const json& j, const char* key, const char* ctx) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(std::string(ctx) + ": missing required field \"" + key + "\"");
    }
    return *it;
}

double get_number(const json& j, const char* key, const char* ctx) {
    const json& v = get_field(j, key, ctx);
    if (!v.is_number()) {
        throw ConfigError(std::string(ctx) + ": field \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

double get_number_or(const json& j, const char* key, double def, const char* ctx) {
    const auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_number()) {
        throw ConfigError(std::string(ctx) + ": field \"" + key + "\" must be a number");
    }
    return it->get<double>();
}

bool get_bool_or(const json& j, const char* key, bool def, const char* ctx) {
    const auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_boolean()) {
        throw ConfigError(std::string(ctx) + ": field \"" + key + "\" must be a boolean");
    }
    return it->get<bool>();
}

std::string get_string(const json& j, const char* key, const char* ctx) {
    const json& v = get_field(j, key, ctx);
    if (!v.is_string()) {
        throw ConfigError(std::string(ctx) + ": field \"" + key + "\" must be a string");
    }
    return v.get<std::string>();
}

std::vector<double> get_number_list(const json& v, const char* what) {
    if (!v.is_array() || v.empty()) {
        throw ConfigError(std::string(what) + " must be a non-empty array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) {
            throw ConfigError(std::string(what) + " must contain only numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

std::function<double(double)> points_tail(std::vector<double> xs, std::vector<double> ts) {
    if (xs.size() != ts.size() || xs.size() < 2) {
        throw ConfigError("tabulated points form needs matching x/tail arrays of length >= 2");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw ConfigError("tabulated points: x values must be positive");
        if (!(ts[i] >= 0.0)) throw ConfigError("tabulated points: tail values must be >= 0");
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw ConfigError("tabulated points: x values must be strictly increasing");
        }
        if (i > 0 && ts[i] > ts[i - 1]) {
            throw ConfigError("tabulated points: tail values must be non-increasing");
        }
    }
    // Flat before the first point, log-linear interpolation between points,
    // zero beyond the last (bounded jump support).
    return [xs = std::move(xs), ts = std::move(ts)](double x) {
        if (x <= xs.front()) return ts.front();
        if (x >= xs.back()) return 0.0;
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        const std::size_t lo = hi - 1;
        const double w = (std::log(x) - std::log(xs[lo])) / (std::log(xs[hi]) - std::log(xs[lo]));
        return ts[lo] + w * (ts[hi] - ts[lo]);
    };
}

}  // namespace

regvar::SlowVaryingFn ell_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("ell must be an object");
    check_keys(j, {"kind", "value", "rho", "inverted_argument", "varying_at"}, "ell");
    const std::string kind = get_string(j, "kind", "ell");
    regvar::SlowVaryingFn ell;
    if (kind == "constant") {
        ell.kind = regvar::SlowVaryingFn::Kind::constant;
        ell.value = get_number_or(j, "value", 1.0, "ell");
        if (!(ell.value > 0.0)) throw RangeError("ell constant value must be positive");
    } else if (kind == "log_shift") {
        ell.kind = regvar::SlowVaryingFn::Kind::log_shift;
    } else if (kind == "iter_log") {
        ell.kind = regvar::SlowVaryingFn::Kind::iter_log;
    } else if (kind == "power_probe") {
        ell.kind = regvar::SlowVaryingFn::Kind::power_probe;
        ell.rho = get_number(j, "rho", "ell");
        if (ell.rho == 0.0) throw RangeError("power_probe rho must be nonzero");
    } else {
        throw UnknownFamilyError(
            "unknown ell kind \"" + kind + "\" (did you mean \"" +
            nearest(kind, {"constant", "log_shift", "iter_log", "power_probe"}) + "\"?)");
    }
    ell.inverted_argument = get_bool_or(j, "inverted_argument", false, "ell");
    if (const auto it = j.find("varying_at"); it != j.end()) {
        const std::string at = it->get<std::string>();
        if (at == "infinity") {
            ell.varying_at = regvar::VaryingAt::infinity;
        } else if (at == "zero_plus") {
            ell.varying_at = regvar::VaryingAt::zero_plus;
        } else {
            throw ConfigError("ell varying_at must be \"infinity\" or \"zero_plus\"");
        }
    }
    return ell;
}

json ell_to_json(const regvar::SlowVaryingFn& ell) {
    json j;
    switch (ell.kind) {
        case regvar::SlowVaryingFn::Kind::constant:
            j["kind"] = "constant";
            j["value"] = ell.value;
            break;
        case regvar::SlowVaryingFn::Kind::log_shift:
            j["kind"] = "log_shift";
            break;
        case regvar::SlowVaryingFn::Kind::iter_log:
            j["kind"] = "iter_log";
            break;
        case regvar::SlowVaryingFn::Kind::power_probe:
            j["kind"] = "power_probe";
            j["rho"] = ell.rho;
            break;
    }
    j["inverted_argument"] = ell.inverted_argument;
    j["varying_at"] = ell.varying_at == regvar::VaryingAt::infinity ? "infinity" : "zero_plus";
    return j;
}

regvar::LevelFraction cfn_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("c_fn must be an object");
    check_keys(j, {"kind", "beta", "a", "value"}, "c_fn");
    const std::string kind = get_string(j, "kind", "c_fn");
    regvar::LevelFraction c;
    if (kind == "power_decay") {
        c.kind = regvar::LevelFraction::Kind::power_decay;
        c.param = get_number(j, "beta", "c_fn");
        if (!(c.param > 0.0)) throw RangeError("power_decay beta must be positive");
    } else if (kind == "power_growth") {
        c.kind = regvar::LevelFraction::Kind::power_growth;
        c.param = get_number(j, "beta", "c_fn");
        if (!(c.param > 0.0)) throw RangeError("power_growth beta must be positive");
    } else if (kind == "log_speed") {
        c.kind = regvar::LevelFraction::Kind::log_speed;
        c.param = get_number(j, "a", "c_fn");
        if (!(c.param > 0.0)) throw RangeError("log_speed a must be positive");
    } else if (kind == "constant") {
        c.kind = regvar::LevelFraction::Kind::constant;
        c.param = get_number(j, "value", "c_fn");
        if (!(c.param > 0.0 && c.param < 1.0)) {
            throw RangeError("constant c_fn value must lie in (0,1)");
        }
    } else {
        throw UnknownFamilyError(
            "unknown c_fn kind \"" + kind + "\" (did you mean \"" +
            nearest(kind, {"power_decay", "power_growth", "log_speed", "constant"}) + "\"?)");
    }
    return c;
}

json cfn_to_json(const regvar::LevelFraction& c_fn) {
    json j;
    j["kind"] = c_fn.name();
    switch (c_fn.kind) {
        case regvar::LevelFraction::Kind::power_decay:
        case regvar::LevelFraction::Kind::power_growth:
            j["beta"] = c_fn.param;
            break;
        case regvar::LevelFraction::Kind::log_speed:
            j["a"] = c_fn.param;
            break;
        case regvar::LevelFraction::Kind::constant:
            j["value"] = c_fn.param;
            break;
    }
    return j;
}

model::SubordinatorSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("spec must be an object");
    check_keys(j, {"drift", "family"}, "spec");
    const double drift = get_number_or(j, "drift", 0.0, "spec");
    const json& fam = get_field(j, "family", "spec");
    if (!fam.is_object()) throw ConfigError("spec.family must be an object");
    const std::string kind = get_string(fam, "kind", "spec.family");

    if (kind == "stable") {
        check_keys(fam, {"kind", "alpha", "c"}, "stable family");
        return model::SubordinatorSpec(
            drift, model::StableFamily{get_number(fam, "alpha", "stable family"),
                                       get_number(fam, "c", "stable family")});
    }
    if (kind == "tempered_stable") {
        check_keys(fam, {"kind", "alpha", "theta", "c"}, "tempered_stable family");
        return model::SubordinatorSpec(
            drift, model::TemperedStableFamily{get_number(fam, "alpha", "tempered_stable family"),
                                               get_number(fam, "theta", "tempered_stable family"),
                                               get_number(fam, "c", "tempered_stable family")});
    }
    if (kind == "compound_poisson") {
        check_keys(fam, {"kind", "rate", "jumps"}, "compound_poisson family");
        const json& jl = get_field(fam, "jumps", "compound_poisson family");
        const std::string jkind = get_string(jl, "kind", "compound_poisson jumps");
        model::CompoundPoissonFamily cp;
        cp.rate = get_number(fam, "rate", "compound_poisson family");
        if (jkind == "exponential") {
            check_keys(jl, {"kind", "mean"}, "exponential jumps");
            cp.jumps = model::ExponentialJumps{get_number(jl, "mean", "exponential jumps")};
        } else if (jkind == "pareto") {
            check_keys(jl, {"kind", "alpha", "xmin"}, "pareto jumps");
            cp.jumps = model::ParetoJumps{get_number(jl, "alpha", "pareto jumps"),
                                          get_number(jl, "xmin", "pareto jumps")};
        } else {
            throw UnknownFamilyError("unknown jump law \"" + jkind + "\" (did you mean \"" +
                                     nearest(jkind, {"exponential", "pareto"}) + "\"?)");
        }
        return model::SubordinatorSpec(drift, cp);
    }
    if (kind == "tabulated_tail") {
        check_keys(fam, {"kind", "form"}, "tabulated_tail family");
        const json& form = get_field(fam, "form", "tabulated_tail family");
        const std::string fkind = get_string(form, "kind", "tabulated_tail form");
        model::TabulatedTailFamily tab;
        if (fkind == "regvar_tail") {
            // Tail x^{-alpha} * ell(x) / Gamma(1-alpha).
            check_keys(form, {"kind", "alpha", "ell"}, "regvar_tail form");
            const double alpha = get_number(form, "alpha", "regvar_tail form");
            if (!(alpha > 0.0 && alpha < 1.0)) {
                throw RangeError("regvar_tail alpha must lie in (0,1)");
            }
            const regvar::SlowVaryingFn ell = ell_from_json(get_field(form, "ell", "regvar_tail"));
            const double g = special::gamma_fn(1.0 - alpha);
            tab.tail = [alpha, g, ell](double x) {
                return std::pow(x, -alpha) * regvar::ell_eval(ell, x) / g;
            };
        } else if (fkind == "points") {
            check_keys(form, {"kind", "x", "tail"}, "points form");
            tab.tail = points_tail(get_number_list(get_field(form, "x", "points form"), "points x"),
                                   get_number_list(get_field(form, "tail", "points form"),
                                                   "points tail"));
        } else {
            throw UnknownFamilyError("unknown tabulated_tail form \"" + fkind +
                                     "\" (did you mean \"" +
                                     nearest(fkind, {"regvar_tail", "points"}) + "\"?)");
        }
        tab.recipe = form.dump();
        return model::SubordinatorSpec(drift, tab);
    }
    if (kind == "none") {
        check_keys(fam, {"kind"}, "none family");
        return model::SubordinatorSpec(drift, model::NoJumps{});
    }
    throw UnknownFamilyError(
        "unknown family kind \"" + kind + "\" (did you mean \"" +
        nearest(kind, {"stable", "tempered_stable", "compound_poisson", "tabulated_tail", "none"}) +
        "\"?)");
}

json spec_to_json(const model::SubordinatorSpec& spec) {
    json fam;
    const model::Family& f = spec.family();
    if (const auto* st = std::get_if<model::StableFamily>(&f)) {
        fam = {{"kind", "stable"}, {"alpha", st->alpha}, {"c", st->scale}};
    } else if (const auto* ts = std::get_if<model::TemperedStableFamily>(&f)) {
        fam = {{"kind", "tempered_stable"},
               {"alpha", ts->alpha},
               {"theta", ts->theta},
               {"c", ts->scale}};
    } else if (const auto* cp = std::get_if<model::CompoundPoissonFamily>(&f)) {
        json jl;
        if (const auto* e = std::get_if<model::ExponentialJumps>(&cp->jumps)) {
            jl = {{"kind", "exponential"}, {"mean", e->mean}};
        } else {
            const auto& p = std::get<model::ParetoJumps>(cp->jumps);
            jl = {{"kind", "pareto"}, {"alpha", p.alpha}, {"xmin", p.xmin}};
        }
        fam = {{"kind", "compound_poisson"}, {"rate", cp->rate}, {"jumps", jl}};
    } else if (const auto* tab = std::get_if<model::TabulatedTailFamily>(&f)) {
        if (tab->recipe.empty()) {
            throw SpecError("this tabulated_tail spec was built from a raw callable and "
                            "cannot be serialized");
        }
        fam = {{"kind", "tabulated_tail"}, {"form", json::parse(tab->recipe)}};
    } else {
        fam = {{"kind", "none"}};
    }
    return {{"drift", spec.drift()}, {"family", fam}};
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    check_keys(j,
               {"experiment", "spec", "alpha", "ell", "c_fn", "s_list", "n", "seed", "policy",
                "thresholds", "range", "q_grid", "lambda_grid", "time_nodes", "t", "x", "x_list",
                "karamata_mode", "epsilon", "expect_holds", "s_grid", "c_grid", "eps_rel_alt",
                "out"},
               "config");

    ExperimentConfig cfg;
    cfg.experiment = get_string(j, "experiment", "config");
    static const std::initializer_list<const char*> kExperiments = {
        "simulate", "verify-dl", "verify-lde", "verify-dlt", "karamata", "potter"};
    bool known = false;
    for (const char* e : kExperiments) known = known || cfg.experiment == e;
    if (!known) {
        throw ConfigError("unknown experiment \"" + cfg.experiment + "\" (did you mean \"" +
                          nearest(cfg.experiment, kExperiments) + "\"?)");
    }

    if (const auto it = j.find("range"); it != j.end()) {
        const std::string r = it->get<std::string>();
        if (r == "long") {
            cfg.range = regvar::Range::long_range;
        } else if (r == "short") {
            cfg.range = regvar::Range::short_range;
        } else {
            throw ConfigError("range must be \"long\" or \"short\"");
        }
    }

    cfg.alpha = get_number_or(j, "alpha", 0.5, "config");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw RangeError("alpha must lie in (0,1), got " + std::to_string(cfg.alpha));
    }

    if (const auto it = j.find("spec"); it != j.end()) {
        cfg.spec = spec_from_json(*it);
    } else if (cfg.experiment != "potter") {
        throw ConfigError("config: missing required field \"spec\"");
    }

    if (const auto it = j.find("ell"); it != j.end()) cfg.ell = ell_from_json(*it);
    if (const auto it = j.find("c_fn"); it != j.end()) cfg.c_fn = cfn_from_json(*it);

    if (const auto it = j.find("s_list"); it != j.end()) {
        cfg.s_list = get_number_list(*it, "s_list");
        for (double s : cfg.s_list) {
            if (!(s > 0.0)) throw RangeError("s_list entries must be positive");
        }
    } else if (cfg.experiment == "simulate" || cfg.experiment == "verify-lde" ||
               cfg.experiment == "verify-dl") {
        throw ConfigError("config: missing required field \"s_list\"");
    }

    const double n_raw = get_number_or(j, "n", 100000.0, "config");
    if (!(n_raw >= 1.0) || n_raw != std::floor(n_raw)) {
        throw RangeError("n must be a positive integer");
    }
    cfg.n = static_cast<std::uint64_t>(n_raw);
    const double seed_raw = get_number_or(j, "seed", 1.0, "config");
    if (!(seed_raw >= 0.0) || seed_raw != std::floor(seed_raw)) {
        throw RangeError("seed must be a nonnegative integer");
    }
    cfg.seed = static_cast<std::uint64_t>(seed_raw);

    if (const auto it = j.find("policy"); it != j.end()) {
        check_keys(*it, {"eps_rel", "compensate", "max_jumps"}, "policy");
        cfg.policy.eps_rel = get_number_or(*it, "eps_rel", 1e-5, "policy");
        cfg.policy.compensate = get_bool_or(*it, "compensate", true, "policy");
        const double mj = get_number_or(*it, "max_jumps", 2e7, "policy");
        if (!(mj >= 1.0)) throw RangeError("policy.max_jumps must be positive");
        cfg.policy.max_jumps = static_cast<std::uint64_t>(mj);
    }
    if (!(cfg.policy.eps_rel > 0.0 && cfg.policy.eps_rel < 1.0)) {
        throw RangeError("policy.eps_rel must lie in (0,1)");
    }

    cfg.thresholds.ks = cfg.range == regvar::Range::short_range ? 0.03 : 0.015;
    if (const auto it = j.find("thresholds"); it != j.end()) {
        check_keys(*it, {"ks", "ratio_low", "ratio_high", "sigmas", "karamata_tol"}, "thresholds");
        cfg.thresholds.ks = get_number_or(*it, "ks", cfg.thresholds.ks, "thresholds");
        cfg.thresholds.ratio_low = get_number_or(*it, "ratio_low", 0.9, "thresholds");
        cfg.thresholds.ratio_high = get_number_or(*it, "ratio_high", 1.1, "thresholds");
        cfg.thresholds.sigmas = get_number_or(*it, "sigmas", 3.0, "thresholds");
        cfg.thresholds.karamata_tol = get_number_or(*it, "karamata_tol", 0.05, "thresholds");
        if (!(cfg.thresholds.ks > 0.0)) throw RangeError("thresholds.ks must be positive");
        if (!(cfg.thresholds.ratio_low < cfg.thresholds.ratio_high)) {
            throw RangeError("thresholds: ratio_low must be below ratio_high");
        }
        if (!(cfg.thresholds.sigmas > 0.0)) throw RangeError("thresholds.sigmas must be positive");
        if (!(cfg.thresholds.karamata_tol > 0.0)) {
            throw RangeError("thresholds.karamata_tol must be positive");
        }
    }

    if (const auto it = j.find("q_grid"); it != j.end()) {
        cfg.q_grid = get_number_list(*it, "q_grid");
        for (double q : cfg.q_grid) {
            if (!(q > 0.0)) throw RangeError("q_grid entries must be positive");
        }
    }
    if (const auto it = j.find("lambda_grid"); it != j.end()) {
        cfg.lambda_grid = get_number_list(*it, "lambda_grid");
        for (double l : cfg.lambda_grid) {
            if (!(l > 0.0)) throw RangeError("lambda_grid entries must be positive");
        }
    }
    const double nodes_raw = get_number_or(j, "time_nodes", 1024.0, "config");
    if (!(nodes_raw >= 8.0) || nodes_raw != std::floor(nodes_raw)) {
        throw RangeError("time_nodes must be an integer >= 8");
    }
    cfg.time_nodes = static_cast<std::size_t>(nodes_raw);

    cfg.t_scale = get_number_or(j, "t", 1.0, "config");
    cfg.x_scale = get_number_or(j, "x", 1.0, "config");
    if (!(cfg.t_scale > 0.0) || !(cfg.x_scale > 0.0)) {
        throw RangeError("t and x must be positive");
    }

    if (const auto it = j.find("x_list"); it != j.end()) {
        cfg.x_list = get_number_list(*it, "x_list");
        for (double x : cfg.x_list) {
            if (!(x > 0.0)) throw RangeError("x_list entries must be positive");
        }
    } else {
        for (int k = 0; k <= 8; ++k) cfg.x_list.push_back(std::pow(10.0, k));
    }

    if (const auto it = j.find("karamata_mode"); it != j.end()) {
        cfg.karamata_mode = it->get<std::string>();
        if (cfg.karamata_mode != "one" && cfg.karamata_mode != "zero") {
            throw ConfigError("karamata_mode must be \"one\" or \"zero\"");
        }
    }

    cfg.epsilon = get_number_or(j, "epsilon", 0.1, "config");
    if (!(cfg.epsilon > 0.0)) throw RangeError("epsilon must be positive");
    cfg.expect_holds = get_bool_or(j, "expect_holds", true, "config");
    if (const auto it = j.find("s_grid"); it != j.end()) {
        cfg.potter_s_grid = get_number_list(*it, "s_grid");
    }
    if (const auto it = j.find("c_grid"); it != j.end()) {
        cfg.potter_c_grid = get_number_list(*it, "c_grid");
        for (double c : *cfg.potter_c_grid) {
            if (!(c > 0.0 && c < 1.0)) throw RangeError("c_grid entries must lie in (0,1)");
        }
    }

    if (const auto it = j.find("eps_rel_alt"); it != j.end()) {
        if (!it->is_number()) throw ConfigError("eps_rel_alt must be a number");
        cfg.eps_rel_alt = it->get<double>();
        if (!(*cfg.eps_rel_alt > 0.0 && *cfg.eps_rel_alt < 1.0)) {
            throw RangeError("eps_rel_alt must lie in (0,1)");
        }
    }

    if (const auto it = j.find("out"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("out must be a string");
        cfg.out = it->get<std::string>();
    } else {
        cfg.out = cfg.experiment + ".csv";
    }

    // Canonical defaults-filled form; nlohmann objects iterate key-sorted, so
    // the dump is reorder-invariant.
    json canon;
    canon["experiment"] = cfg.experiment;
    if (cfg.spec) canon["spec"] = spec_to_json(*cfg.spec);
    canon["alpha"] = cfg.alpha;
    canon["ell"] = ell_to_json(cfg.ell);
    canon["c_fn"] = cfn_to_json(cfg.c_fn);
    if (!cfg.s_list.empty()) canon["s_list"] = cfg.s_list;
    canon["n"] = cfg.n;
    canon["seed"] = cfg.seed;
    canon["policy"] = {{"eps_rel", cfg.policy.eps_rel},
                       {"compensate", cfg.policy.compensate},
                       {"max_jumps", cfg.policy.max_jumps}};
    canon["thresholds"] = {{"ks", cfg.thresholds.ks},
                           {"ratio_low", cfg.thresholds.ratio_low},
                           {"ratio_high", cfg.thresholds.ratio_high},
                           {"sigmas", cfg.thresholds.sigmas},
                           {"karamata_tol", cfg.thresholds.karamata_tol}};
    canon["range"] = cfg.range == regvar::Range::long_range ? "long" : "short";
    canon["q_grid"] = cfg.q_grid;
    canon["lambda_grid"] = cfg.lambda_grid;
    canon["time_nodes"] = cfg.time_nodes;
    canon["t"] = cfg.t_scale;
    canon["x"] = cfg.x_scale;
    canon["x_list"] = cfg.x_list;
    canon["karamata_mode"] = cfg.karamata_mode;
    canon["epsilon"] = cfg.epsilon;
    canon["expect_holds"] = cfg.expect_holds;
    if (cfg.potter_s_grid) canon["s_grid"] = *cfg.potter_s_grid;
    if (cfg.potter_c_grid) canon["c_grid"] = *cfg.potter_c_grid;
    if (cfg.eps_rel_alt) canon["eps_rel_alt"] = *cfg.eps_rel_alt;
    canon["out"] = cfg.out;
    cfg.canonical = canon;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open config file: " + path);
    }
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) { return cfg.canonical; }

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string text = cfg.canonical.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

}  // namespace sublab::harness
