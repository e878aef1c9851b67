#include "sublab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "sublab/errors.hpp"
#include "sublab/fmt.hpp"
#include "sublab/limit_laws.hpp"
#include "sublab/model.hpp"
#include "sublab/regvar.hpp"
#include "sublab/sampler.hpp"
#include "sublab/transform.hpp"
#include "sublab/version.hpp"

namespace sublab::harness {

namespace {

std::string error_type_name(const Error& e) {
    if (dynamic_cast<const SpecError*>(&e)) return "SpecError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const NumericError*>(&e)) return "NumericError";
    if (dynamic_cast<const NeverCrossesError*>(&e)) return "NeverCrossesError";
    if (dynamic_cast<const ResourceError*>(&e)) return "ResourceError";
    if (dynamic_cast<const ParameterError*>(&e)) return "ParameterError";
    if (dynamic_cast<const HypothesisError*>(&e)) return "HypothesisError";
    if (dynamic_cast<const FormatError*>(&e)) return "FormatError";
    if (dynamic_cast<const RangeError*>(&e)) return "RangeError";
    if (dynamic_cast<const UnknownFamilyError*>(&e)) return "UnknownFamilyError";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    return "Error";
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        out += ch;
    }
    out += '"';
    return out;
}

/// Deterministic per-row seed for experiments whose rows are independent runs.
std::uint64_t row_seed(std::uint64_t seed, std::size_t row) {
    return seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(row + 1));
}

struct Sink {
    std::ostringstream os;
    std::size_t rows = 0;
    bool all_pass = true;
    bool creep_flagged = false;

    void data_row(const std::string& line, bool pass) {
        os << line << '\n';
        ++rows;
        all_pass = all_pass && pass;
    }

    void note_creep(double fraction) {
        creep_flagged = creep_flagged || fraction > limits::kArtificialCreepBudget;
    }
};

constexpr const char* kVerifierHeader =
    "theorem,family,alpha,s,c,p_hat,ci_low,ci_high,target,ratio,ks,pass";

std::string verifier_row(const std::string& theorem, const std::string& family, double alpha,
                         double s, const std::string& c, const std::string& p_hat,
                         const std::string& ci_low, const std::string& ci_high,
                         const std::string& target, const std::string& ratio,
                         const std::string& ks, bool pass) {
    std::ostringstream os;
    os << theorem << ',' << family << ',' << fmt::g17(alpha) << ',' << fmt::g17(s) << ',' << c
       << ',' << p_hat << ',' << ci_low << ',' << ci_high << ',' << target << ',' << ratio << ','
       << ks << ',' << (pass ? 1 : 0);
    return os.str();
}

void run_simulate(const ExperimentConfig& cfg, Sink& sink) {
    sink.os << "replica,level,crossing_time,undershoot,overshoot,crept\n";
    const bool drift_is_zero = cfg.spec->drift() == 0.0;
    for (std::size_t i = 0; i < cfg.s_list.size(); ++i) {
        const sampler::PreparedSampler prep(*cfg.spec, cfg.s_list[i], cfg.policy);
        const auto samples = sampler::batch_prepared(prep, cfg.n, cfg.seed,
                                                     static_cast<std::uint64_t>(i) << 32);
        for (std::size_t j = 0; j < samples.size(); ++j) {
            const sampler::PassageSample& p = samples[j];
            std::ostringstream row;
            row << j << ',' << fmt::g17(p.level) << ',' << fmt::g17(p.crossing_time) << ','
                << fmt::g17(p.undershoot) << ',' << fmt::g17(p.overshoot) << ','
                << (p.crept ? 1 : 0);
            sink.data_row(row.str(), true);
        }
        sink.note_creep(limits::creep_fraction(samples, drift_is_zero));
    }
}

void run_verify_dl(const ExperimentConfig& cfg, Sink& sink) {
    sink.os << kVerifierHeader << '\n';
    const std::string theorem =
        cfg.range == regvar::Range::long_range ? "dl_long" : "dl_short";
    const std::string family = cfg.spec->family_name();
    for (std::size_t i = 0; i < cfg.s_list.size(); ++i) {
        const limits::DlTheoremResult r =
            limits::dl_theorem_check(*cfg.spec, cfg.alpha, cfg.s_list[i], cfg.n, cfg.policy,
                                     row_seed(cfg.seed, i), cfg.range, cfg.thresholds.ks);
        sink.note_creep(r.artificial_creep_fraction);
        sink.data_row(verifier_row(theorem, family, cfg.alpha, cfg.s_list[i], "", "", "", "", "",
                                   "", fmt::g17(r.ks), r.pass),
                      r.pass);
    }
}

void run_verify_lde(const ExperimentConfig& cfg, Sink& sink) {
    sink.os << kVerifierHeader << '\n';
    const std::string family = cfg.spec->family_name();
    const bool reduced = cfg.t_scale == 1.0 && cfg.x_scale == 1.0;

    // Per row: level s, fraction c, estimate with CI, target, ratio-to-target.
    struct Row {
        double s, c, p_hat, ci_low, ci_high, target, ratio, creep;
    };
    const auto collect = [&](const sampler::TruncationPolicy& policy) {
        std::vector<Row> rows;
        if (reduced) {
            for (const limits::LdeRow& r :
                 limits::lde_theorem_check(*cfg.spec, cfg.alpha, cfg.ell, cfg.c_fn, cfg.s_list,
                                           cfg.n, policy, cfg.seed, cfg.range)) {
                rows.push_back({r.s, r.c, r.p_hat, r.ci_low, r.ci_high, r.target, r.ratio,
                                r.artificial_creep_fraction});
            }
        } else {
            for (const limits::ScaledProbRow& r : limits::scaled_probability_check(
                     *cfg.spec, cfg.alpha, cfg.ell, cfg.c_fn, cfg.t_scale, cfg.x_scale,
                     cfg.s_list, cfg.n, policy, cfg.seed, cfg.range)) {
                rows.push_back({r.s, r.c, r.p_hat, r.ci_low, r.ci_high, r.limit,
                                r.normalized / r.limit, r.artificial_creep_fraction});
            }
        }
        return rows;
    };

    const std::vector<Row> rows = collect(cfg.policy);
    std::vector<Row> alt_rows;
    if (cfg.eps_rel_alt) {
        sampler::TruncationPolicy alt = cfg.policy;
        alt.eps_rel = *cfg.eps_rel_alt;
        alt_rows = collect(alt);
    }

    const std::string theorem =
        !reduced ? "scaled"
                 : (cfg.range == regvar::Range::long_range ? "lde_long" : "lde_short");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        // Creeping over budget flags the run but does not overturn the
        // statistical verdict; the flag is judged on the primary-policy rows
        // that produce the reported estimates.
        sink.note_creep(r.creep);
        bool pass = true;
        // Truncation-bias diagnostic: the estimate must be stable across the
        // two eps_rel values to within the statistical CI width.
        if (!alt_rows.empty()) {
            pass = std::abs(r.p_hat - alt_rows[i].p_hat) < (r.ci_high - r.ci_low);
        }
        // The theorem speaks as s reaches the end of the list; only the
        // terminal row is held to the ratio band.
        if (i + 1 == rows.size()) {
            pass = pass && r.ratio >= cfg.thresholds.ratio_low &&
                   r.ratio <= cfg.thresholds.ratio_high;
        }
        sink.data_row(verifier_row(theorem, family, cfg.alpha, r.s, fmt::g17(r.c),
                                   fmt::g17(r.p_hat), fmt::g17(r.ci_low), fmt::g17(r.ci_high),
                                   fmt::g17(r.target), fmt::g17(r.ratio), "", pass),
                      pass);
    }
}

void run_verify_dlt(const ExperimentConfig& cfg, Sink& sink) {
    sink.os << "q,lambda,theoretical,empirical,stderr,abs_diff,sigmas\n";
    std::size_t k = 0;
    for (double q : cfg.q_grid) {
        const std::vector<double> grid = transform::default_time_grid(q, cfg.time_nodes);
        for (double lambda : cfg.lambda_grid) {
            const double theo = transform::dl_theoretical(*cfg.spec, q, lambda);
            const transform::DlEstimate est = transform::dl_empirical(
                *cfg.spec, q, lambda, cfg.n, grid, cfg.policy, row_seed(cfg.seed, k));
            const double abs_diff = std::abs(est.estimate - theo);
            const double sigmas = est.std_error > 0.0
                                      ? abs_diff / est.std_error
                                      : (abs_diff == 0.0
                                             ? 0.0
                                             : std::numeric_limits<double>::infinity());
            const bool pass = sigmas <= cfg.thresholds.sigmas;
            std::ostringstream row;
            row << fmt::g17(q) << ',' << fmt::g17(lambda) << ',' << fmt::g17(theo) << ','
                << fmt::g17(est.estimate) << ',' << fmt::g17(est.std_error) << ','
                << fmt::g17(abs_diff) << ',' << fmt::g17(sigmas);
            sink.data_row(row.str(), pass);
            ++k;
        }
    }
}

void run_karamata(const ExperimentConfig& cfg, Sink& sink) {
    sink.os << kVerifierHeader << '\n';
    const std::string family = cfg.spec->family_name();
    const double target = cfg.karamata_mode == "one" ? 1.0 : 0.0;
    for (double x : cfg.x_list) {
        const double ratio = regvar::karamata_ratio(*cfg.spec, cfg.alpha, cfg.ell, x);
        const bool pass = std::abs(ratio - target) <= cfg.thresholds.karamata_tol;
        sink.data_row(verifier_row("karamata", family, cfg.alpha, x, "", "", "", "",
                                   fmt::g17(target), fmt::g17(ratio), "", pass),
                      pass);
    }
}

void run_potter(const ExperimentConfig& cfg, Sink& sink) {
    sink.os << kVerifierHeader << '\n';
    const std::vector<double> s_grid =
        cfg.potter_s_grid ? *cfg.potter_s_grid : regvar::default_potter_s_grid();
    const std::vector<double> c_grid =
        cfg.potter_c_grid ? *cfg.potter_c_grid : regvar::default_potter_c_grid();
    const regvar::PotterResult r = regvar::potter_check(cfg.ell, cfg.epsilon, s_grid, c_grid);
    const bool pass = r.holds == cfg.expect_holds;
    // Column mapping for the envelope search: s := witness threshold R,
    // c := epsilon, target := expected outcome, ratio := envelope constant A.
    sink.data_row(verifier_row("potter", cfg.ell.name(), cfg.alpha, r.R, fmt::g17(cfg.epsilon),
                               "", "", "", cfg.expect_holds ? "1" : "0", fmt::g17(r.A), "", pass),
                  pass);
}

}  // namespace

ResultRecord run_experiment(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();

    ResultRecord record;
    record.experiment = cfg.experiment;
    record.config_hash = config_hash_hex(cfg);
    record.csv_path = cfg.out;
    record.version = kVersion;

    Sink sink;
    sink.os << "# " << kToolkitName << ' ' << kVersion << '\n';
    sink.os << "# experiment=" << cfg.experiment << '\n';
    sink.os << "# config_hash=" << record.config_hash << '\n';
    sink.os << "# family=" << (cfg.spec ? cfg.spec->family_name() : cfg.ell.name()) << '\n';
    sink.os << "# alpha=" << fmt::g17(cfg.alpha) << '\n';

    try {
        if (cfg.experiment == "simulate") {
            run_simulate(cfg, sink);
        } else if (cfg.experiment == "verify-dl") {
            run_verify_dl(cfg, sink);
        } else if (cfg.experiment == "verify-lde") {
            run_verify_lde(cfg, sink);
        } else if (cfg.experiment == "verify-dlt") {
            run_verify_dlt(cfg, sink);
        } else if (cfg.experiment == "karamata") {
            run_karamata(cfg, sink);
        } else if (cfg.experiment == "potter") {
            run_potter(cfg, sink);
        } else {
            throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
        }
        record.all_pass = sink.all_pass;
        record.creep_flagged = sink.creep_flagged;
    } catch (const Error& e) {
        record.errored = true;
        record.error_type = error_type_name(e);
        record.error_message = e.what();
        record.all_pass = false;
        sink.os << "error," << record.error_type << ',' << csv_quote(record.error_message)
                << '\n';
    }
    record.rows = sink.rows;

    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file for writing: " + cfg.out);
    }
    out << sink.os.str();
    out.close();
    if (!out) {
        throw ConfigError("failed writing output file: " + cfg.out);
    }

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

}  // namespace sublab::harness
