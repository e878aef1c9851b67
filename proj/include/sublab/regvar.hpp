#pragma once

#include <string>
#include <vector>

#include "sublab/model.hpp"

namespace sublab::regvar {

enum class VaryingAt { zero_plus, infinity };

/// Slowly varying function from a closed set of named kinds. PowerProbe is
/// deliberately not slowly varying; it exists for negative tests.
/// inverted_argument composes the base kind with 1/x, which turns a function
/// slowly varying at infinity into one slowly varying at 0+.
struct SlowVaryingFn {
    enum class Kind { constant, log_shift, iter_log, power_probe };

    Kind kind = Kind::constant;
    double value = 1.0;              // constant kind
    double rho = 0.0;                // power_probe exponent, must be nonzero for that kind
    bool inverted_argument = false;  // evaluate the base at 1/x
    VaryingAt varying_at = VaryingAt::infinity;

    std::string name() const;
};

/// Evaluate ell(x) for x > 0.
double ell_eval(const SlowVaryingFn& ell, double x);

/// Pi(x,inf) * Gamma(1-alpha) / (x^{-alpha} * ell(x)). Tends to 1 (x -> inf or
/// x -> 0+) exactly when the corresponding Karamata tail condition holds.
double karamata_ratio(const model::SubordinatorSpec& spec, double alpha,
                      const SlowVaryingFn& ell, double x);

struct PotterResult {
    bool holds;
    double A;
    double R;
};

/// Bounded grid search for the two-sided Potter envelope
/// A^{-1} c^eps <= ell(s)/ell(c s) <= A c^{-eps} over all grid points with s > R.
/// Reports the smallest A (over R in {0} and the s grid); holds = false when no
/// A <= 1e6 works.
PotterResult potter_check(const SlowVaryingFn& ell, double epsilon,
                          const std::vector<double>& s_grid, const std::vector<double>& c_grid);

/// Documented default grids: s = 10^k for k = 0..8, and c = 10^{-j/4} for
/// j = 1..320 (down to 1e-80, deep enough that a power probe must exceed the
/// A <= 1e6 budget).
std::vector<double> default_potter_s_grid();
std::vector<double> default_potter_c_grid();

/// Which asymptotic regime a theorem check runs in: long-range sends levels to
/// infinity (Phi regularly varying at 0+), short-range sends them to 0+ (Phi
/// regularly varying at infinity).
enum class Range { long_range, short_range };

/// Level fraction c(s) from a closed set of named forms, so hypothesis
/// conditions (c(s) -> 0, c(s)s -> infinity) are statically checkable.
struct LevelFraction {
    enum class Kind { power_decay, power_growth, log_speed, constant };

    Kind kind = Kind::power_decay;
    double param = 0.5;  // beta for the powers, a for log_speed, the value for constant

    /// c(s). log_speed is exp(-a*sqrt(log s)) and requires s > 1.
    double operator()(double s) const;

    std::string name() const;

    /// c(s) -> 0 in the given regime (s -> infinity for long, s -> 0+ for short).
    bool vanishes(Range range) const;
    /// c(s)*s -> infinity as s -> infinity (the long-range speed condition).
    bool keeps_cs_unbounded() const;
};

/// Two-point log-slope probe of Phi near the regime's endpoint: requires
/// |log2(Phi(2*l0)/Phi(l0)) - alpha| <= tol at l0 = 1e-9 (long) or 1e9 (short).
/// The loose tolerance (default 0.1) admits genuinely slowly varying factors
/// while still rejecting wrong-index families. Throws HypothesisError.
void require_rv_index(const model::SubordinatorSpec& spec, double alpha, Range range,
                      double tol = 0.1);

/// Validates the c_fn hypotheses for the regime, both statically (named-form
/// knowledge) and numerically along s_list (ordering, c in (0,1), trends).
/// Throws HypothesisError naming the violated condition.
void require_level_fraction(const LevelFraction& c_fn, const std::vector<double>& s_list,
                            Range range);

}  // namespace sublab::regvar
