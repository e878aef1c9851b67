#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sublab/model.hpp"
#include "sublab/regvar.hpp"
#include "sublab/sampler.hpp"

namespace sublab::harness {

/// Pass/fail knobs surfaced in config rather than buried in code.
struct Thresholds {
    double ks = 0.015;           // KS bound (0.03 default when range=short)
    double ratio_low = 0.9;      // ratio-to-target band, applied at the terminal level
    double ratio_high = 1.1;
    double sigmas = 3.0;         // |empirical-theoretical| <= sigmas * stderr
    double karamata_tol = 0.05;  // |ratio-1| <= tol (mode one) or ratio <= tol (mode zero)
};

struct ExperimentConfig {
    std::string experiment;  // simulate | verify-dl | verify-lde | verify-dlt | karamata | potter
    std::optional<model::SubordinatorSpec> spec;
    double alpha = 0.5;
    regvar::SlowVaryingFn ell;
    regvar::LevelFraction c_fn;
    std::vector<double> s_list;
    std::uint64_t n = 100000;
    std::uint64_t seed = 1;
    sampler::TruncationPolicy policy;
    Thresholds thresholds;
    regvar::Range range = regvar::Range::long_range;
    std::vector<double> q_grid{0.5, 1.0, 2.0};
    std::vector<double> lambda_grid{0.5, 1.0, 2.0};
    std::size_t time_nodes = 1024;
    double t_scale = 1.0;  // "t" in config; != 1 switches verify-lde to the scaled check
    double x_scale = 1.0;  // "x" in config
    std::vector<double> x_list;              // karamata probe points (default: decades 1..1e8)
    std::string karamata_mode = "one";       // expected limit: "one" or "zero"
    double epsilon = 0.1;                    // potter exponent
    bool expect_holds = true;                // potter expectation
    std::optional<std::vector<double>> potter_s_grid;  // optional grid overrides
    std::optional<std::vector<double>> potter_c_grid;
    std::optional<double> eps_rel_alt;  // two-eps diagnostic for verify-lde
    std::string out;                    // CSV path, default "<experiment>.csv"
    nlohmann::json canonical;           // defaults-filled canonical form (hash input)
};

/// Read, parse, validate; fills defaults and the canonical form.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// The canonical (defaults-filled, key-sorted) JSON form.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 over the canonical JSON text; key order cannot affect it.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

// Schema pieces, shared with the python bindings.
nlohmann::json spec_to_json(const model::SubordinatorSpec& spec);
model::SubordinatorSpec spec_from_json(const nlohmann::json& j);
nlohmann::json ell_to_json(const regvar::SlowVaryingFn& ell);
regvar::SlowVaryingFn ell_from_json(const nlohmann::json& j);
nlohmann::json cfn_to_json(const regvar::LevelFraction& c_fn);
regvar::LevelFraction cfn_from_json(const nlohmann::json& j);

}  // namespace sublab::harness
