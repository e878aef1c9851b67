#include "sublab/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sublab/errors.hpp"
#include "sublab/quadrature.hpp"
#include "sublab/special_functions.hpp"

namespace sublab::model {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw SpecError(msg);
}

void validate_family(const Family& family, double drift) {
    if (const auto* st = std::get_if<StableFamily>(&family)) {
        require(st->alpha > 0.0 && st->alpha < 1.0, "stable: alpha must lie in (0,1)");
        require(st->scale > 0.0, "stable: scale must be positive");
    } else if (const auto* ts = std::get_if<TemperedStableFamily>(&family)) {
        require(ts->alpha > 0.0 && ts->alpha < 1.0, "tempered_stable: alpha must lie in (0,1)");
        require(ts->theta > 0.0, "tempered_stable: theta must be positive");
        require(ts->scale > 0.0, "tempered_stable: scale must be positive");
    } else if (const auto* cp = std::get_if<CompoundPoissonFamily>(&family)) {
        require(cp->rate > 0.0, "compound_poisson: rate must be positive");
        if (const auto* e = std::get_if<ExponentialJumps>(&cp->jumps)) {
            require(e->mean > 0.0, "compound_poisson: exponential jump mean must be positive");
        } else {
            const auto& p = std::get<ParetoJumps>(cp->jumps);
            require(p.alpha > 0.0, "compound_poisson: pareto jump alpha must be positive");
            require(p.xmin > 0.0, "compound_poisson: pareto jump xmin must be positive");
        }
    } else if (const auto* tab = std::get_if<TabulatedTailFamily>(&family)) {
        require(static_cast<bool>(tab->tail), "tabulated_tail: tail callable is empty");
        // Probe a log-spaced grid: finite, nonnegative, non-increasing.
        bool any_positive = false;
        double prev = std::numeric_limits<double>::infinity();
        for (int k = -24; k <= 24; ++k) {
            const double x = std::pow(10.0, 0.5 * k);
            const double v = tab->tail(x);
            require(std::isfinite(v), "tabulated_tail: tail not finite at x=" + std::to_string(x));
            require(v >= 0.0, "tabulated_tail: tail negative at x=" + std::to_string(x));
            require(v <= prev * (1.0 + 1e-9) + 1e-300,
                    "tabulated_tail: tail increases near x=" + std::to_string(x));
            any_positive = any_positive || v > 0.0;
            prev = v;
        }
        require(any_positive || drift > 0.0, "process is identically zero");
        // Integrability of the finite part: integral of the tail over (0,1).
        try {
            quad::tail_integral_to(tab->tail, 1.0);
        } catch (const NumericError& e) {
            throw SpecError(std::string("tabulated_tail: tail integral over (0,1) diverges: ") +
                            e.what());
        }
    } else {
        require(drift > 0.0, "process is identically zero (no jumps and no drift)");
    }
}

std::function<double(double)> tail_of(const SubordinatorSpec& spec) {
    return [&spec](double x) { return levy_tail(spec, x); };
}

}  // namespace

SubordinatorSpec::SubordinatorSpec(double drift, Family family)
    : drift_(drift), family_(std::move(family)) {
    require(drift_ >= 0.0, "drift must be nonnegative");
    require(std::isfinite(drift_), "drift must be finite");
    validate_family(family_, drift_);
}

std::string SubordinatorSpec::family_name() const {
    if (std::holds_alternative<StableFamily>(family_)) return "stable";
    if (std::holds_alternative<TemperedStableFamily>(family_)) return "tempered_stable";
    if (std::holds_alternative<CompoundPoissonFamily>(family_)) return "compound_poisson";
    if (std::holds_alternative<TabulatedTailFamily>(family_)) return "tabulated_tail";
    return "none";
}

double levy_tail(const SubordinatorSpec& spec, double x) {
    if (!(x > 0.0)) {
        throw DomainError("levy_tail requires x > 0, got " + std::to_string(x));
    }
    const Family& f = spec.family();
    if (const auto* st = std::get_if<StableFamily>(&f)) {
        return st->scale * std::pow(x, -st->alpha) / special::gamma_fn(1.0 - st->alpha);
    }
    if (const auto* ts = std::get_if<TemperedStableFamily>(&f)) {
        // Integrating the tilted density c*alpha/Gamma(1-alpha) * x^{-1-alpha} e^{-theta x}
        // by parts: tail = c/Gamma(1-alpha) * (x^{-alpha} e^{-theta x}
        //                  - theta^alpha * Gamma(1-alpha, theta x)).
        const double g1ma = special::gamma_fn(1.0 - ts->alpha);
        const double upper = special::inc_gamma_upper(1.0 - ts->alpha, ts->theta * x);
        const double v = (ts->scale / g1ma) * (std::pow(x, -ts->alpha) * std::exp(-ts->theta * x) -
                                               std::pow(ts->theta, ts->alpha) * upper);
        return std::fmax(v, 0.0);  // clamp the tiny negative rounding can produce far out
    }
    if (const auto* cp = std::get_if<CompoundPoissonFamily>(&f)) {
        if (const auto* e = std::get_if<ExponentialJumps>(&cp->jumps)) {
            return cp->rate * std::exp(-x / e->mean);
        }
        const auto& p = std::get<ParetoJumps>(cp->jumps);
        return x < p.xmin ? cp->rate : cp->rate * std::pow(p.xmin / x, p.alpha);
    }
    if (const auto* tab = std::get_if<TabulatedTailFamily>(&f)) {
        return std::fmax(tab->tail(x), 0.0);
    }
    return 0.0;  // pure drift
}

bool finite_activity(const SubordinatorSpec& spec) {
    return std::holds_alternative<CompoundPoissonFamily>(spec.family()) ||
           std::holds_alternative<NoJumps>(spec.family());
}

double phi(const SubordinatorSpec& spec, double lambda) {
    if (!(lambda >= 0.0)) {
        throw DomainError("phi requires lambda >= 0, got " + std::to_string(lambda));
    }
    if (lambda == 0.0) return 0.0;
    const Family& f = spec.family();
    const double lin = spec.drift() * lambda;
    if (const auto* st = std::get_if<StableFamily>(&f)) {
        return lin + st->scale * std::pow(lambda, st->alpha);
    }
    if (const auto* ts = std::get_if<TemperedStableFamily>(&f)) {
        return lin + ts->scale * (std::pow(lambda + ts->theta, ts->alpha) -
                                  std::pow(ts->theta, ts->alpha));
    }
    if (const auto* cp = std::get_if<CompoundPoissonFamily>(&f)) {
        if (const auto* e = std::get_if<ExponentialJumps>(&cp->jumps)) {
            return lin + cp->rate * lambda * e->mean / (1.0 + lambda * e->mean);
        }
        return phi_quadrature(spec, lambda);  // pareto jumps: no elementary closed form
    }
    if (std::holds_alternative<TabulatedTailFamily>(f)) {
        return phi_quadrature(spec, lambda);
    }
    return lin;
}

double phi_quadrature(const SubordinatorSpec& spec, double lambda, double rel_tol) {
    if (!(lambda >= 0.0)) {
        throw DomainError("phi_quadrature requires lambda >= 0, got " + std::to_string(lambda));
    }
    if (lambda == 0.0) return 0.0;
    if (std::holds_alternative<NoJumps>(spec.family())) return spec.drift() * lambda;
    const double integral = quad::exp_weighted_tail_integral(tail_of(spec), lambda, rel_tol);
    return lambda * (spec.drift() + integral);
}

}  // namespace sublab::model
