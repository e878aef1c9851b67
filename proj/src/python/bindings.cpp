#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sublab/config.hpp"
#include "sublab/errors.hpp"
#include "sublab/limit_laws.hpp"
#include "sublab/model.hpp"
#include "sublab/regvar.hpp"
#include "sublab/runner.hpp"
#include "sublab/sampler.hpp"
#include "sublab/transform.hpp"
#include "sublab/version.hpp"

namespace py = pybind11;
using namespace sublab;

namespace {

model::SubordinatorSpec spec_from_json_str(const std::string& text) {
    return harness::spec_from_json(nlohmann::json::parse(text));
}

regvar::SlowVaryingFn ell_from_json_str(const std::string& text) {
    return harness::ell_from_json(nlohmann::json::parse(text));
}

sampler::TruncationPolicy make_policy(double eps_rel, bool compensate, std::uint64_t max_jumps) {
    sampler::TruncationPolicy p;
    p.eps_rel = eps_rel;
    p.compensate = compensate;
    p.max_jumps = max_jumps;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "subordinator first-passage simulation and limit-law verification (C++ core)";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "SublabError", PyExc_RuntimeError);

    py::class_<model::SubordinatorSpec>(m, "SubordinatorSpec")
        .def_property_readonly("drift", &model::SubordinatorSpec::drift)
        .def_property_readonly("family_name", &model::SubordinatorSpec::family_name)
        .def("__repr__", [](const model::SubordinatorSpec& s) {
            return "<SubordinatorSpec family=" + s.family_name() +
                   " drift=" + std::to_string(s.drift()) + ">";
        });

    py::class_<regvar::SlowVaryingFn>(m, "SlowVaryingFn")
        .def_property_readonly("name", &regvar::SlowVaryingFn::name)
        .def("__call__",
             [](const regvar::SlowVaryingFn& f, double x) { return regvar::ell_eval(f, x); });

    py::class_<sampler::PassageSample>(m, "PassageSample")
        .def_readonly("level", &sampler::PassageSample::level)
        .def_readonly("crossing_time", &sampler::PassageSample::crossing_time)
        .def_readonly("undershoot", &sampler::PassageSample::undershoot)
        .def_readonly("overshoot", &sampler::PassageSample::overshoot)
        .def_readonly("crept", &sampler::PassageSample::crept);

    m.def("spec_from_json", &spec_from_json_str, py::arg("json_text"),
          "Build a SubordinatorSpec from its JSON description.");
    m.def("ell_from_json", &ell_from_json_str, py::arg("json_text"),
          "Build a slowly varying function from its JSON description.");

    m.def("phi", &model::phi, py::arg("spec"), py::arg("lam"),
          "Laplace exponent Phi(lambda).");
    m.def("levy_tail", &model::levy_tail, py::arg("spec"), py::arg("x"),
          "Levy tail Pi(x, inf).");

    m.def(
        "batch_passages",
        [](const model::SubordinatorSpec& spec, double s, std::uint64_t n, double eps_rel,
           bool compensate, std::uint64_t max_jumps, std::uint64_t seed) {
            return sampler::batch_passages(spec, s, make_policy(eps_rel, compensate, max_jumps),
                                           n, seed);
        },
        py::arg("spec"), py::arg("s"), py::arg("n"), py::arg("eps_rel") = 1e-5,
        py::arg("compensate") = true, py::arg("max_jumps") = 20'000'000ull, py::arg("seed") = 1,
        "n first-passage samples over level s (replica i uses substream (seed, i)).");

    m.def("beta_cdf", &limits::beta_cdf, py::arg("alpha"), py::arg("t"),
          "CDF of Beta(alpha, 1-alpha).");
    m.def("beta_cdf_small_t_asymptote", &limits::beta_cdf_small_t_asymptote, py::arg("alpha"),
          py::arg("t"), "sin(pi a)/(pi a) * t^a.");
    m.def(
        "ks_to_beta",
        [](std::vector<double> values, double alpha) {
            return limits::ks_distance(limits::EmpiricalCdf(std::move(values)),
                                       [alpha](double x) { return limits::beta_cdf(alpha, x); });
        },
        py::arg("values"), py::arg("alpha"),
        "KS distance between an empirical sample in [0,1] and Beta(alpha,1-alpha).");
    m.def(
        "lde_target",
        [](double alpha, const regvar::SlowVaryingFn& ell, double s, double c) {
            return limits::lde_target(alpha, ell, s, c);
        },
        py::arg("alpha"), py::arg("ell"), py::arg("s"), py::arg("c"),
        "sin(pi a)/(pi a) * (ell(s)/ell(c s)) * c^a.");

    m.def("dl_theoretical", &transform::dl_theoretical, py::arg("spec"), py::arg("q"),
          py::arg("lam"), "Phi(q) / (q Phi(q+lambda)).");
    m.def(
        "dl_empirical",
        [](const model::SubordinatorSpec& spec, double q, double lam, std::uint64_t n,
           std::size_t nodes, double eps_rel, std::uint64_t seed) {
            const auto est = transform::dl_empirical(spec, q, lam, n,
                                                     transform::default_time_grid(q, nodes),
                                                     make_policy(eps_rel, true, 20'000'000ull),
                                                     seed);
            return py::make_tuple(est.estimate, est.std_error);
        },
        py::arg("spec"), py::arg("q"), py::arg("lam"), py::arg("n") = 10000,
        py::arg("nodes") = 256, py::arg("eps_rel") = 1e-5, py::arg("seed") = 1,
        "Monte Carlo double-Laplace estimate -> (estimate, std_error).");
    m.def(
        "invert_laplace_gs",
        [](const std::function<double(double)>& fhat, double t, int terms) {
            return transform::invert_laplace_gs(fhat, t, terms);
        },
        py::arg("fhat"), py::arg("t"), py::arg("terms") = 14,
        "Gaver-Stehfest inversion of a Laplace transform at t.");

    m.def(
        "karamata_ratio",
        [](const model::SubordinatorSpec& spec, double alpha, const regvar::SlowVaryingFn& ell,
           double x) { return regvar::karamata_ratio(spec, alpha, ell, x); },
        py::arg("spec"), py::arg("alpha"), py::arg("ell"), py::arg("x"),
        "Pi(x,inf) * Gamma(1-alpha) / (x^-alpha ell(x)).");
    m.def(
        "potter_check",
        [](const regvar::SlowVaryingFn& ell, double epsilon) {
            const auto r = regvar::potter_check(ell, epsilon, regvar::default_potter_s_grid(),
                                                regvar::default_potter_c_grid());
            py::dict d;
            d["holds"] = r.holds;
            d["A"] = r.A;
            d["R"] = r.R;
            return d;
        },
        py::arg("ell"), py::arg("epsilon"),
        "Potter envelope search on the documented default grids.");

    m.def(
        "run_config",
        [](const std::string& json_text) {
            const auto cfg = harness::config_from_json(nlohmann::json::parse(json_text));
            const auto rec = harness::run_experiment(cfg);
            py::dict d;
            d["experiment"] = rec.experiment;
            d["config_hash"] = rec.config_hash;
            d["csv_path"] = rec.csv_path;
            d["rows"] = rec.rows;
            d["all_pass"] = rec.all_pass;
            d["creep_flagged"] = rec.creep_flagged;
            d["wall_seconds"] = rec.wall_seconds;
            d["version"] = rec.version;
            d["errored"] = rec.errored;
            d["error_type"] = rec.error_type;
            d["error_message"] = rec.error_message;
            return d;
        },
        py::arg("json_text"),
        "Run a full experiment from a JSON config string; writes its CSV.");

    m.def("version", [] { return std::string(kVersion); });
}
