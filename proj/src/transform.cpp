#include "sublab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sublab/errors.hpp"

namespace sublab::transform {

namespace {

constexpr double kTimeCutoffFactor = 14.0;  // exp(-14) < 1e-6

struct NodeStat {
    double mean;
    double var;  // variance of the mean estimate
};

// Trapezoid weights on an arbitrary grid.
std::vector<double> trapezoid_weights(const std::vector<double>& t) {
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        const double h = 0.5 * (t[j + 1] - t[j]);
        w[j] += h;
        w[j + 1] += h;
    }
    return w;
}

}  // namespace

double dl_theoretical(const model::SubordinatorSpec& spec, double q, double lambda) {
    if (!(q > 0.0) || !(lambda > 0.0)) {
        throw DomainError("dl_theoretical requires q > 0 and lambda > 0");
    }
    return model::phi(spec, q) / (q * model::phi(spec, q + lambda));
}

DoubleLaplacePoint dl_point(const model::SubordinatorSpec& spec, double q, double lambda) {
    return {q, lambda, dl_theoretical(spec, q, lambda)};
}

std::vector<double> default_time_grid(double q, std::size_t nodes) {
    if (!(q > 0.0)) {
        throw DomainError("default_time_grid requires q > 0");
    }
    if (nodes < 8) {
        throw ParameterError("default_time_grid needs at least 8 nodes");
    }
    const double tmax = kTimeCutoffFactor / q;
    std::vector<double> t(nodes + 1);
    for (std::size_t j = 0; j <= nodes; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(nodes);
        t[j] = tmax * u * u;
    }
    return t;
}

DlEstimate dl_empirical(const model::SubordinatorSpec& spec, double q, double lambda,
                        std::uint64_t n, const std::vector<double>& t_grid,
                        const sampler::TruncationPolicy& policy, std::uint64_t seed) {
    if (!(q > 0.0) || !(lambda > 0.0)) {
        throw DomainError("dl_empirical requires q > 0 and lambda > 0");
    }
    if (n < 2) {
        throw ParameterError("dl_empirical needs n >= 2 per node");
    }
    if (t_grid.size() < 8) {
        throw ParameterError("dl_empirical needs a t grid with at least 8 nodes");
    }
    if (t_grid.front() != 0.0) {
        throw ParameterError("t grid must start at 0");
    }
    for (std::size_t j = 0; j + 1 < t_grid.size(); ++j) {
        if (!(t_grid[j] < t_grid[j + 1])) {
            throw ParameterError("t grid must be strictly increasing");
        }
    }
    const double t_back = t_grid.back();
    if (std::exp(-q * t_back) > 1e-6) {
        throw ParameterError("t grid too short: exp(-q*t_max) = " +
                             std::to_string(std::exp(-q * t_back)) +
                             " leaves more than 1e-6 of the transform mass uncovered");
    }

    const std::size_t m = t_grid.size();
    std::vector<NodeStat> stats(m);
    stats[0] = {1.0, 0.0};  // X_{T(0)-} = 0: the integrand is exactly 1
    for (std::size_t j = 1; j < m; ++j) {
        const sampler::PreparedSampler prep(spec, t_grid[j], policy);
        const auto samples =
            sampler::batch_prepared(prep, n, seed, static_cast<std::uint64_t>(j) << 32);
        double mean = 0.0, m2 = 0.0;
        std::uint64_t k = 0;
        for (const auto& p : samples) {
            const double v = std::exp(-lambda * p.undershoot);
            ++k;
            const double d = v - mean;
            mean += d / static_cast<double>(k);
            m2 += d * (v - mean);
        }
        const double var_mean = m2 / (static_cast<double>(n - 1) * static_cast<double>(n));
        stats[j] = {mean, var_mean};
    }

    auto integrate = [&](std::size_t stride) {
        // Subsampled grid always keeps the first and last node.
        std::vector<double> ts, ms, vs;
        for (std::size_t j = 0; j < m; j += stride) {
            ts.push_back(t_grid[j]);
            ms.push_back(stats[j].mean);
            vs.push_back(stats[j].var);
        }
        if (ts.back() != t_grid.back()) {
            ts.push_back(t_grid.back());
            ms.push_back(stats[m - 1].mean);
            vs.push_back(stats[m - 1].var);
        }
        const auto w = trapezoid_weights(ts);
        double val = 0.0, var = 0.0;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const double wj = w[j] * std::exp(-q * ts[j]);
            val += wj * ms[j];
            var += wj * wj * vs[j];
        }
        // Exponential tail closure beyond the last node.
        const double tail_w = std::exp(-q * ts.back()) / q;
        val += tail_w * ms.back();
        var += tail_w * tail_w * vs.back();
        return DlEstimate{val, std::sqrt(var)};
    };

    const DlEstimate full = integrate(1);
    const DlEstimate half = integrate(2);
    // Richardson: trapezoid error of the full grid is about a third of the
    // full-vs-half difference (statistical noise largely cancels, the nodes
    // are shared).
    const double quad_err = std::fabs(full.estimate - half.estimate) / 3.0;
    if (quad_err > 3.0 * full.std_error) {
        throw NumericError("dl_empirical grid too coarse: estimated quadrature error " +
                           std::to_string(quad_err) + " exceeds 3x standard error " +
                           std::to_string(full.std_error) + " at q=" + std::to_string(q) +
                           ", lambda=" + std::to_string(lambda));
    }
    return full;
}

double invert_laplace_gs(const std::function<double(double)>& fhat, double t, int terms) {
    if (!(t > 0.0)) {
        throw DomainError("invert_laplace_gs requires t > 0");
    }
    if (terms < 2 || terms % 2 != 0) {
        throw ParameterError("invert_laplace_gs requires an even terms count >= 2");
    }
    if (terms > 20) {
        throw ParameterError("invert_laplace_gs: terms > 20 overflows the binomial weights "
                             "in double precision");
    }
    const int half = terms / 2;
    // Stehfest weights, accumulated in long double to tame the cancellation.
    std::vector<long double> fact(static_cast<std::size_t>(terms) + 1, 1.0L);
    for (int i = 1; i <= terms; ++i) fact[i] = fact[i - 1] * i;
    const double ln2_t = std::log(2.0) / t;
    long double sum = 0.0L;
    for (int k = 1; k <= terms; ++k) {
        long double vk = 0.0L;
        const int j_lo = (k + 1) / 2;
        const int j_hi = std::min(k, half);
        for (int j = j_lo; j <= j_hi; ++j) {
            long double term = 1.0L;
            for (int p = 0; p < half; ++p) term *= j;  // j^half
            term *= fact[2 * j];
            term /= fact[half - j];
            term /= fact[j];
            term /= fact[j - 1];
            term /= fact[k - j];
            term /= fact[2 * j - k];
            vk += term;
        }
        if ((k + half) % 2 != 0) vk = -vk;
        sum += vk * fhat(k * ln2_t);
    }
    return static_cast<double>(sum * ln2_t);
}

std::vector<ScaledDlRow> scaled_dl_limit_check(const model::SubordinatorSpec& spec, double alpha,
                                               const regvar::SlowVaryingFn& ell,
                                               const regvar::LevelFraction& c_fn, double q,
                                               double lambda, const std::vector<double>& s_list,
                                               const ScaledDlParams& params) {
    if (!(q > 0.0) || !(lambda > 0.0)) {
        throw DomainError("scaled_dl_limit_check requires q > 0 and lambda > 0");
    }
    regvar::require_rv_index(spec, alpha, regvar::Range::long_range);
    regvar::require_level_fraction(c_fn, s_list, regvar::Range::long_range);

    const double limit = std::pow(q, alpha - 1.0) * std::pow(lambda, -alpha);
    std::vector<ScaledDlRow> rows;
    rows.reserve(s_list.size());
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        const double s = s_list[i];
        const double c = c_fn(s);
        const double qs = q / s;
        const double ls = lambda / (c * s);
        double dl;
        if (params.mode == DlMode::theoretical) {
            dl = dl_theoretical(spec, qs, ls);
        } else {
            // Per-row seed derived so rows use disjoint streams.
            const std::uint64_t row_seed =
                params.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i + 1));
            dl = dl_empirical(spec, qs, ls, params.n, default_time_grid(qs, params.nodes),
                              params.policy, row_seed)
                     .estimate;
        }
        const double scaled = dl / s;
        const double normalized =
            (regvar::ell_eval(ell, c * s) / (std::pow(c, alpha) * regvar::ell_eval(ell, s))) *
            scaled;
        rows.push_back({s, normalized, limit});
    }
    return rows;
}

}  // namespace sublab::transform
