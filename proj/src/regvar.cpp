#include "sublab/regvar.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sublab/errors.hpp"
#include "sublab/special_functions.hpp"

namespace sublab::regvar {

namespace {

double base_eval(const SlowVaryingFn& ell, double x) {
    switch (ell.kind) {
        case SlowVaryingFn::Kind::constant:
            return ell.value;
        case SlowVaryingFn::Kind::log_shift:
            return 1.0 + std::log1p(x);
        case SlowVaryingFn::Kind::iter_log:
            return 1.0 + std::log1p(std::log1p(x));
        case SlowVaryingFn::Kind::power_probe:
            return std::pow(x, ell.rho);
    }
    throw DomainError("ell_eval: unhandled kind");
}

}  // namespace

std::string SlowVaryingFn::name() const {
    std::string n;
    switch (kind) {
        case Kind::constant: n = "constant"; break;
        case Kind::log_shift: n = "log_shift"; break;
        case Kind::iter_log: n = "iter_log"; break;
        case Kind::power_probe: n = "power_probe"; break;
    }
    if (inverted_argument) n += "_inv";
    return n;
}

double ell_eval(const SlowVaryingFn& ell, double x) {
    if (!(x > 0.0)) {
        throw DomainError("ell_eval requires x > 0, got " + std::to_string(x));
    }
    if (ell.kind == SlowVaryingFn::Kind::constant && !(ell.value > 0.0)) {
        throw DomainError("ell_eval: constant kind requires positive value");
    }
    if (ell.kind == SlowVaryingFn::Kind::power_probe && ell.rho == 0.0) {
        throw DomainError("ell_eval: power_probe requires rho != 0 (use constant instead)");
    }
    return base_eval(ell, ell.inverted_argument ? 1.0 / x : x);
}

double karamata_ratio(const model::SubordinatorSpec& spec, double alpha,
                      const SlowVaryingFn& ell, double x) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("karamata_ratio requires alpha in (0,1)");
    }
    const double tail = model::levy_tail(spec, x);
    const double denom = std::pow(x, -alpha) * ell_eval(ell, x);
    return tail * special::gamma_fn(1.0 - alpha) / denom;
}

PotterResult potter_check(const SlowVaryingFn& ell, double epsilon,
                          const std::vector<double>& s_grid, const std::vector<double>& c_grid) {
    if (!(epsilon > 0.0)) {
        throw DomainError("potter_check requires epsilon > 0");
    }
    if (s_grid.empty() || c_grid.empty()) {
        throw DomainError("potter_check requires non-empty grids");
    }
    constexpr double kBudget = 1e6;

    // A needed so the two-sided bound holds at every grid point with s > R.
    auto needed_for = [&](double R) {
        double need = 1.0;
        for (double s : s_grid) {
            if (!(s > R)) continue;
            const double num = ell_eval(ell, s);
            for (double c : c_grid) {
                const double ratio = num / ell_eval(ell, c * s);
                const double ce = std::pow(c, epsilon);
                need = std::fmax(need, std::fmax(ratio * ce, ce / ratio));
            }
        }
        return need;
    };

    double best_A = std::numeric_limits<double>::infinity();
    double best_R = 0.0;
    std::vector<double> candidates;
    candidates.push_back(0.0);
    candidates.insert(candidates.end(), s_grid.begin(), s_grid.end());
    for (double R : candidates) {
        bool any = false;
        for (double s : s_grid) any = any || s > R;
        if (!any) continue;  // empty point set would make the bound vacuous
        const double A = needed_for(R);
        if (A < best_A) {
            best_A = A;
            best_R = R;
        }
    }
    return {best_A <= kBudget, best_A, best_R};
}

std::vector<double> default_potter_s_grid() {
    std::vector<double> s;
    for (int k = 0; k <= 8; ++k) s.push_back(std::pow(10.0, k));
    return s;
}

std::vector<double> default_potter_c_grid() {
    std::vector<double> c;
    for (int j = 1; j <= 320; ++j) c.push_back(std::pow(10.0, -0.25 * j));
    return c;
}

double LevelFraction::operator()(double s) const {
    if (!(s > 0.0)) {
        throw DomainError("level fraction requires s > 0, got " + std::to_string(s));
    }
    switch (kind) {
        case Kind::power_decay:
            return std::pow(s, -param);
        case Kind::power_growth:
            return std::pow(s, param);
        case Kind::log_speed:
            if (!(s > 1.0)) {
                throw DomainError("log_speed level fraction requires s > 1, got " +
                                  std::to_string(s));
            }
            return std::exp(-param * std::sqrt(std::log(s)));
        case Kind::constant:
            return param;
    }
    throw DomainError("level fraction: unhandled kind");
}

std::string LevelFraction::name() const {
    switch (kind) {
        case Kind::power_decay: return "power_decay";
        case Kind::power_growth: return "power_growth";
        case Kind::log_speed: return "log_speed";
        case Kind::constant: return "constant";
    }
    return "?";
}

bool LevelFraction::vanishes(Range range) const {
    switch (kind) {
        case Kind::power_decay:
            return range == Range::long_range && param > 0.0;
        case Kind::power_growth:
            return range == Range::short_range && param > 0.0;
        case Kind::log_speed:
            return range == Range::long_range && param > 0.0;
        case Kind::constant:
            return false;
    }
    return false;
}

bool LevelFraction::keeps_cs_unbounded() const {
    switch (kind) {
        case Kind::power_decay:
            return param < 1.0;  // c(s)s = s^{1-beta}
        case Kind::log_speed:
            return param > 0.0;  // c(s)s = exp(log s - a sqrt(log s))
        case Kind::power_growth:
        case Kind::constant:
            return true;  // c(s)s grows whenever c does not decay
    }
    return false;
}

void require_rv_index(const model::SubordinatorSpec& spec, double alpha, Range range,
                      double tol) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw HypothesisError("index alpha must lie in (0,1), got " + std::to_string(alpha));
    }
    const double l0 = range == Range::long_range ? 1e-9 : 1e9;
    const double p1 = model::phi(spec, l0);
    const double p2 = model::phi(spec, 2.0 * l0);
    if (!(p1 > 0.0) || !(p2 > 0.0)) {
        throw HypothesisError("Laplace exponent vanished at the index probe point");
    }
    const double slope = std::log2(p2 / p1);
    if (std::fabs(slope - alpha) > tol) {
        const char* where = range == Range::long_range ? "0+" : "infinity";
        throw HypothesisError(
            "Laplace exponent is not regularly varying at " + std::string(where) +
            " with index " + std::to_string(alpha) + ": two-point slope estimate " +
            std::to_string(slope) + " differs by more than " + std::to_string(tol));
    }
}

void require_level_fraction(const LevelFraction& c_fn, const std::vector<double>& s_list,
                            Range range) {
    if (s_list.empty()) {
        throw HypothesisError("empty level list");
    }
    if (!c_fn.vanishes(range)) {
        throw HypothesisError("c(s) does not tend to 0 in the " +
                              std::string(range == Range::long_range ? "long" : "short") +
                              "-range regime (c_fn kind " + c_fn.name() + ")");
    }
    if (range == Range::long_range && !c_fn.keeps_cs_unbounded()) {
        throw HypothesisError("c(s)*s does not tend to infinity (c_fn kind " + c_fn.name() +
                              ", param " + std::to_string(c_fn.param) + ")");
    }
    // Numeric validation along the list. Long-range lists ascend toward
    // infinity, short-range lists descend toward 0.
    for (std::size_t i = 0; i + 1 < s_list.size(); ++i) {
        const bool ordered = range == Range::long_range ? s_list[i] < s_list[i + 1]
                                                        : s_list[i] > s_list[i + 1];
        if (!ordered) {
            throw HypothesisError(std::string("s_list must be strictly ") +
                                  (range == Range::long_range ? "increasing" : "decreasing") +
                                  " for this regime");
        }
    }
    double prev_c = -1.0;
    double prev_cs = -1.0;
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        const double s = s_list[i];
        const double c = c_fn(s);
        if (!(c > 0.0 && c < 1.0)) {
            throw HypothesisError("c(s) must lie in (0,1); got " + std::to_string(c) +
                                  " at s=" + std::to_string(s));
        }
        if (i > 0) {
            if (!(c < prev_c)) {
                throw HypothesisError("c(s) is not decreasing along the level list");
            }
            if (range == Range::long_range && !(c * s > prev_cs)) {
                throw HypothesisError("c(s)*s is not increasing along the level list");
            }
        }
        prev_c = c;
        prev_cs = c * s;
    }
}

}  // namespace sublab::regvar
