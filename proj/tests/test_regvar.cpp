#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "sublab/errors.hpp"
#include "sublab/model.hpp"
#include "sublab/regvar.hpp"
#include "sublab/special_functions.hpp"

using namespace sublab;
using regvar::LevelFraction;
using regvar::Range;
using regvar::SlowVaryingFn;

namespace {

SlowVaryingFn constant(double v = 1.0) {
    SlowVaryingFn f;
    f.kind = SlowVaryingFn::Kind::constant;
    f.value = v;
    return f;
}

SlowVaryingFn log_shift() {
    SlowVaryingFn f;
    f.kind = SlowVaryingFn::Kind::log_shift;
    return f;
}

SlowVaryingFn iter_log() {
    SlowVaryingFn f;
    f.kind = SlowVaryingFn::Kind::iter_log;
    return f;
}

SlowVaryingFn power_probe(double rho) {
    SlowVaryingFn f;
    f.kind = SlowVaryingFn::Kind::power_probe;
    f.rho = rho;
    return f;
}

LevelFraction c_fn(LevelFraction::Kind kind, double param) {
    LevelFraction c;
    c.kind = kind;
    c.param = param;
    return c;
}

}  // namespace

TEST_CASE("ell_eval closed forms") {
    CHECK(regvar::ell_eval(constant(2.5), 123.0) == 2.5);
    CHECK(regvar::ell_eval(log_shift(), 1e4) ==
          doctest::Approx(10.210440366976517).epsilon(1e-14));
    CHECK(regvar::ell_eval(log_shift(), 0.0 + 1e-300) == doctest::Approx(1.0));
    CHECK(regvar::ell_eval(iter_log(), std::exp(std::exp(1.0) - 1.0) - 1.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(regvar::ell_eval(power_probe(0.2), 32.0) ==
          doctest::Approx(std::pow(32.0, 0.2)).epsilon(1e-14));

    SlowVaryingFn inv = log_shift();
    inv.inverted_argument = true;
    inv.varying_at = regvar::VaryingAt::zero_plus;
    CHECK(regvar::ell_eval(inv, 1e-4) == doctest::Approx(10.210440366976517).epsilon(1e-14));
    CHECK(inv.name() == "log_shift_inv");

    CHECK_THROWS_AS(regvar::ell_eval(log_shift(), 0.0), DomainError);
    CHECK_THROWS_AS(regvar::ell_eval(log_shift(), -1.0), DomainError);
    CHECK_THROWS_AS(regvar::ell_eval(power_probe(0.0), 1.0), DomainError);
}

TEST_CASE("named slowly varying kinds satisfy the defining property; the probe does not") {
    // ell(2x)/ell(x) -> 1 at large x for genuinely slowly varying kinds. For
    // log_shift the gap decays like log(2)/log(x), so the probe point must sit
    // far out before a 2% band is meaningful.
    for (const auto& ell : {constant(3.0), log_shift(), iter_log()}) {
        const double r = regvar::ell_eval(ell, 2e16) / regvar::ell_eval(ell, 1e16);
        CHECK(std::abs(r - 1.0) <= 0.02);
    }
    const double rp =
        regvar::ell_eval(power_probe(0.2), 2e8) / regvar::ell_eval(power_probe(0.2), 1e8);
    CHECK(rp == doctest::Approx(std::pow(2.0, 0.2)).epsilon(1e-12));

    // Inverted-argument composition is slowly varying at 0+.
    SlowVaryingFn inv = log_shift();
    inv.inverted_argument = true;
    inv.varying_at = regvar::VaryingAt::zero_plus;
    const double r0 = regvar::ell_eval(inv, 2e-16) / regvar::ell_eval(inv, 1e-16);
    CHECK(std::abs(r0 - 1.0) <= 0.02);
}

TEST_CASE("karamata ratio is exactly 1 for stable specs") {
    const model::SubordinatorSpec stable{0.0, model::StableFamily{0.5, 1.0}};
    for (int k = -6; k <= 6; ++k) {
        const double x = std::pow(10.0, k);
        CHECK(std::abs(regvar::karamata_ratio(stable, 0.5, constant(), x) - 1.0) <= 1e-12);
    }
    // Scale c multiplies the tail, so ell = Constant{c} restores ratio 1.
    const model::SubordinatorSpec scaled{0.0, model::StableFamily{0.3, 2.0}};
    CHECK(std::abs(regvar::karamata_ratio(scaled, 0.3, constant(2.0), 10.0) - 1.0) <= 1e-12);
}

TEST_CASE("karamata ratio detects the small-x regime of tempered stable tails") {
    const model::SubordinatorSpec ts{0.0, model::TemperedStableFamily{0.5, 1.0, 1.0}};
    const double r = regvar::karamata_ratio(ts, 0.5, constant(), 1e-4);
    CHECK(r == doctest::Approx(0.9823754598243114).epsilon(1e-10));
    CHECK(std::abs(r - 1.0) <= 0.02);
    // Deeper into the small-x regime the ratio approaches 1.
    CHECK(std::abs(regvar::karamata_ratio(ts, 0.5, constant(), 1e-8) - 1.0) <=
          std::abs(r - 1.0));
}

TEST_CASE("karamata ratio vanishes for light-tailed compound Poisson") {
    const model::SubordinatorSpec cp{
        0.0, model::CompoundPoissonFamily{1.0, model::ExponentialJumps{1.0}}};
    CHECK(regvar::karamata_ratio(cp, 0.5, constant(), 50.0) <= 1e-8);
}

TEST_CASE("potter envelope holds for genuinely slowly varying kinds") {
    const auto s_grid = regvar::default_potter_s_grid();
    const auto c_grid = regvar::default_potter_c_grid();
    CHECK(s_grid.size() == 9);
    CHECK(c_grid.size() == 320);
    CHECK(c_grid.back() == doctest::Approx(1e-80).epsilon(1e-9));

    const auto rc = regvar::potter_check(constant(), 0.1, s_grid, c_grid);
    CHECK(rc.holds);
    CHECK(rc.A == doctest::Approx(1.0).epsilon(1e-12));

    const auto rl = regvar::potter_check(log_shift(), 0.1, s_grid, c_grid);
    CHECK(rl.holds);
    CHECK(rl.A >= 1.0);

    const auto ri = regvar::potter_check(iter_log(), 0.1, s_grid, c_grid);
    CHECK(ri.holds);
}

TEST_CASE("potter envelope fails for the power probe on the documented grids") {
    const auto r = regvar::potter_check(power_probe(0.2), 0.1,
                                        regvar::default_potter_s_grid(),
                                        regvar::default_potter_c_grid());
    CHECK_FALSE(r.holds);
    // Exact requirement at c = 1e-80: A >= c^{-(rho - eps)} = 1e8.
    CHECK(r.A == doctest::Approx(1e8).epsilon(1e-6));
}

TEST_CASE("potter constant A shrinks as epsilon grows") {
    const auto s_grid = regvar::default_potter_s_grid();
    const auto c_grid = regvar::default_potter_c_grid();
    const auto tight = regvar::potter_check(log_shift(), 0.05, s_grid, c_grid);
    const auto mid = regvar::potter_check(log_shift(), 0.1, s_grid, c_grid);
    const auto loose = regvar::potter_check(log_shift(), 0.2, s_grid, c_grid);
    CHECK(mid.A <= tight.A);
    CHECK(loose.A <= mid.A);

    // Oracle re-scan: verify reported A actually satisfies the two-sided bound.
    for (double s : s_grid) {
        if (!(s > mid.R)) continue;
        for (double c : c_grid) {
            const double ratio =
                regvar::ell_eval(log_shift(), s) / regvar::ell_eval(log_shift(), c * s);
            CHECK(ratio <= mid.A * std::pow(c, -0.1) * (1.0 + 1e-12));
            CHECK(ratio >= std::pow(c, 0.1) / mid.A * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("level fraction forms and hypothesis flags") {
    const auto decay = c_fn(LevelFraction::Kind::power_decay, 0.4);
    CHECK(decay(100.0) == doctest::Approx(std::pow(100.0, -0.4)).epsilon(1e-14));
    CHECK(decay.vanishes(Range::long_range));
    CHECK_FALSE(decay.vanishes(Range::short_range));
    CHECK(decay.keeps_cs_unbounded());
    CHECK_FALSE(c_fn(LevelFraction::Kind::power_decay, 1.5).keeps_cs_unbounded());

    const auto growth = c_fn(LevelFraction::Kind::power_growth, 0.5);
    CHECK(growth(0.01) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(growth.vanishes(Range::short_range));
    CHECK_FALSE(growth.vanishes(Range::long_range));

    const auto logs = c_fn(LevelFraction::Kind::log_speed, 1.0);
    CHECK(logs(std::exp(4.0)) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(logs.vanishes(Range::long_range));
    CHECK(logs.keeps_cs_unbounded());
    CHECK_THROWS_AS(logs(0.5), DomainError);

    const auto cons = c_fn(LevelFraction::Kind::constant, 0.3);
    CHECK(cons(42.0) == 0.3);
    CHECK_FALSE(cons.vanishes(Range::long_range));
    CHECK_FALSE(cons.vanishes(Range::short_range));
}

TEST_CASE("log_speed keeps the ell ratio tending to 1 for log_shift") {
    // With c(s) = exp(-sqrt(log s)), ell(s)/ell(c(s)s) -> 1 for ell = LogShift,
    // but only at rate sqrt(log s)/log s: the gap drops below 5% around
    // s ~ 1e200, so the landing probe sits near the top of the double range.
    const auto logs = c_fn(LevelFraction::Kind::log_speed, 1.0);
    double prev_gap = 1e9;
    for (double s : {1e25, 1e50, 1e100, 1e200, 1e300}) {
        const double ratio =
            regvar::ell_eval(log_shift(), s) / regvar::ell_eval(log_shift(), logs(s) * s);
        const double gap = std::abs(ratio - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 0.05);
}

TEST_CASE("rv-index gate accepts matching families and rejects wrong indices") {
    const model::SubordinatorSpec stable{0.0, model::StableFamily{0.5, 1.0}};
    const model::SubordinatorSpec ts{0.0, model::TemperedStableFamily{0.5, 1.0, 1.0}};
    const model::SubordinatorSpec cp{
        0.0, model::CompoundPoissonFamily{1.0, model::ExponentialJumps{1.0}}};

    CHECK_NOTHROW(regvar::require_rv_index(stable, 0.5, Range::long_range));
    CHECK_NOTHROW(regvar::require_rv_index(stable, 0.5, Range::short_range));
    CHECK_NOTHROW(regvar::require_rv_index(ts, 0.5, Range::short_range));

    // Compound Poisson: Phi ~ rate*mean*lambda at 0+ (index 1, not alpha).
    CHECK_THROWS_AS(regvar::require_rv_index(cp, 0.5, Range::long_range), HypothesisError);
    try {
        regvar::require_rv_index(cp, 0.5, Range::long_range);
        FAIL("expected HypothesisError");
    } catch (const HypothesisError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("regularly varying") != std::string::npos);
        CHECK(msg.find("0+") != std::string::npos);
    }
    // Tempered stable at 0+ is index 1 as well (Phi is differentiable there).
    CHECK_THROWS_AS(regvar::require_rv_index(ts, 0.5, Range::long_range), HypothesisError);
    // Wrong alpha for a stable family fails in both regimes.
    CHECK_THROWS_AS(regvar::require_rv_index(stable, 0.3, Range::long_range), HypothesisError);
}

TEST_CASE("level-fraction gate validates static and numeric hypotheses") {
    const std::vector<double> s_long = {1e2, 1e3, 1e4};
    const std::vector<double> s_short = {1e-1, 1e-2, 1e-3};

    CHECK_NOTHROW(regvar::require_level_fraction(c_fn(LevelFraction::Kind::power_decay, 0.4),
                                                 s_long, Range::long_range));
    CHECK_NOTHROW(regvar::require_level_fraction(c_fn(LevelFraction::Kind::power_growth, 0.5),
                                                 s_short, Range::short_range));
    CHECK_NOTHROW(regvar::require_level_fraction(c_fn(LevelFraction::Kind::log_speed, 1.0),
                                                 s_long, Range::long_range));

    // Constant c never vanishes.
    CHECK_THROWS_AS(regvar::require_level_fraction(c_fn(LevelFraction::Kind::constant, 0.5),
                                                   s_long, Range::long_range),
                    HypothesisError);
    // Too-fast decay violates c(s)*s -> infinity.
    CHECK_THROWS_AS(regvar::require_level_fraction(c_fn(LevelFraction::Kind::power_decay, 1.5),
                                                   s_long, Range::long_range),
                    HypothesisError);
    // Regime and list direction must agree.
    CHECK_THROWS_AS(regvar::require_level_fraction(c_fn(LevelFraction::Kind::power_decay, 0.4),
                                                   s_short, Range::long_range),
                    HypothesisError);
    // c(s) must stay inside (0,1) on the list.
    CHECK_THROWS_AS(
        regvar::require_level_fraction(c_fn(LevelFraction::Kind::power_decay, 0.4),
                                       std::vector<double>{0.5, 1e2, 1e4}, Range::long_range),
        HypothesisError);
    CHECK_THROWS_AS(regvar::require_level_fraction(c_fn(LevelFraction::Kind::power_decay, 0.4),
                                                   {}, Range::long_range),
                    HypothesisError);
}
