#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sublab/errors.hpp"
#include "sublab/model.hpp"
#include "sublab/transform.hpp"

using namespace sublab;
using model::SubordinatorSpec;

namespace {

SubordinatorSpec stable_half() { return {0.0, model::StableFamily{0.5, 1.0}}; }

SubordinatorSpec cp_exp() {
    return {0.0, model::CompoundPoissonFamily{1.0, model::ExponentialJumps{1.0}}};
}

regvar::SlowVaryingFn constant_ell() { return {}; }

regvar::LevelFraction sqrt_decay() {
    regvar::LevelFraction c;
    c.kind = regvar::LevelFraction::Kind::power_decay;
    c.param = 0.5;
    return c;
}

}  // namespace

TEST_CASE("dl_theoretical closed forms") {
    CHECK(transform::dl_theoretical(stable_half(), 1.0, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(transform::dl_theoretical(cp_exp(), 2.0, 1e-12) ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK(transform::dl_theoretical(stable_half(), 1.0, 1.0) ==
          doctest::Approx(0.7071067811865476).epsilon(1e-12));
    CHECK(transform::dl_theoretical(cp_exp(), 1.0, 1.0) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK_THROWS_AS(transform::dl_theoretical(stable_half(), 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(transform::dl_theoretical(stable_half(), 1.0, -1.0), DomainError);
}

TEST_CASE("double Laplace values stay in (0, 1/q] and decrease in lambda") {
    for (const auto& spec : {stable_half(), cp_exp()}) {
        for (double q : {0.5, 1.0, 2.0}) {
            double prev = 1.0 / q + 1e-15;
            for (double lam : {1e-6, 1e-2, 0.5, 1.0, 2.0, 10.0, 1e4}) {
                const transform::DoubleLaplacePoint p = transform::dl_point(spec, q, lam);
                CHECK(p.value > 0.0);
                CHECK(p.value <= 1.0 / q + 1e-15);
                CHECK(p.value <= prev * (1.0 + 1e-12));
                prev = p.value;
            }
        }
    }
}

TEST_CASE("Gaver-Stehfest inversion reproduces the closed-form pairs at t=1") {
    const double inv_1_over_q = transform::invert_laplace_gs([](double q) { return 1.0 / q; }, 1.0);
    CHECK(std::abs(inv_1_over_q - 1.0) <= 1e-7);

    const double inv_shift =
        transform::invert_laplace_gs([](double q) { return 1.0 / (q + 1.0); }, 1.0);
    CHECK(std::abs(inv_shift - std::exp(-1.0)) <= 1e-6);

    const double inv_sqrt =
        transform::invert_laplace_gs([](double q) { return 1.0 / std::sqrt(q); }, 1.0);
    CHECK(std::abs(inv_sqrt - 1.0 / std::sqrt(3.14159265358979323846)) <= 1e-6);
}

TEST_CASE("Gaver-Stehfest parameter validation") {
    const auto fhat = [](double q) { return 1.0 / q; };
    CHECK_THROWS_AS(transform::invert_laplace_gs(fhat, 1.0, 13), ParameterError);
    CHECK_THROWS_AS(transform::invert_laplace_gs(fhat, 1.0, 22), ParameterError);
    CHECK_THROWS_AS(transform::invert_laplace_gs(fhat, 1.0, 0), ParameterError);
    CHECK_THROWS_AS(transform::invert_laplace_gs(fhat, 0.0), DomainError);
    CHECK_NOTHROW(transform::invert_laplace_gs(fhat, 1.0, 20));
}

TEST_CASE("inversion round-trip of the compound Poisson transform is non-increasing in t") {
    // t -> E exp(-lambda X_{T(t)-}) is non-increasing; recover it by inverting
    // q -> dl_theoretical(q, lambda) on a t grid.
    const auto spec = cp_exp();
    const double lambda = 1.0;
    double prev = 1.0 + 1e-9;
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double v = transform::invert_laplace_gs(
            [&](double q) { return transform::dl_theoretical(spec, q, lambda); }, t);
        CHECK(v > 0.0);
        CHECK(v <= prev + 1e-7);
        prev = v;
    }
}

TEST_CASE("default time grid is quadratic with the documented cutoff") {
    const auto grid = transform::default_time_grid(2.0, 16);
    REQUIRE(grid.size() == 17);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(grid[8] == doctest::Approx(7.0 * 0.25).epsilon(1e-12));  // (1/2)^2 of the span
    CHECK_THROWS_AS(transform::default_time_grid(1.0, 4), ParameterError);
    CHECK_THROWS_AS(transform::default_time_grid(0.0, 16), DomainError);
}

TEST_CASE("dl_empirical matches the identity for the bias-free sampler") {
    const auto spec = cp_exp();
    const auto grid = transform::default_time_grid(1.0, 96);
    const transform::DlEstimate est =
        transform::dl_empirical(spec, 1.0, 1.0, 4000, grid, {}, 101);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.estimate - 0.75) <= 4.0 * est.std_error + 0.002);
}

TEST_CASE("dl_empirical approaches 1/q when lambda is small") {
    // The limit value at lambda = 0 is 1/q. lambda must stay away from zero:
    // the Monte Carlo spread of exp(-lambda X) scales with lambda, and the
    // coarse-grid guard requires the quadrature bias to stay below it. At
    // lambda = 0.03 the exact value is 1/q - lambda/2 + O(lambda^2) = 0.98544,
    // and 256 nodes keep the trapezoid bias under the guard across seeds.
    const auto spec = cp_exp();
    const auto grid = transform::default_time_grid(1.0, 256);
    const transform::DlEstimate est =
        transform::dl_empirical(spec, 1.0, 0.03, 500, grid, {}, 7);
    CHECK(std::abs(est.estimate - 1.0) <= 0.02);
    CHECK(est.estimate < 1.0);
}

TEST_CASE("dl_empirical grid validation") {
    const auto spec = cp_exp();
    const auto grid = transform::default_time_grid(1.0, 64);
    CHECK_THROWS_AS(transform::dl_empirical(spec, 1.0, 1.0, 1, grid, {}, 1), ParameterError);
    CHECK_THROWS_AS(
        transform::dl_empirical(spec, 1.0, 1.0, 100, std::vector<double>{0.0, 1.0, 2.0}, {}, 1),
        ParameterError);
    CHECK_THROWS_AS(transform::dl_empirical(spec, 1.0, 1.0, 100,
                                            std::vector<double>{0.5, 1.0, 2.0, 3.0, 4.0, 5.0,
                                                                6.0, 7.0, 14.0},
                                            {}, 1),
                    ParameterError);  // grid must start at 0
    std::vector<double> unsorted = grid;
    std::swap(unsorted[3], unsorted[4]);
    CHECK_THROWS_AS(transform::dl_empirical(spec, 1.0, 1.0, 100, unsorted, {}, 1),
                    ParameterError);
    std::vector<double> short_grid = transform::default_time_grid(1.0, 64);
    short_grid.resize(20);  // t_max ~ 1.3: far too short for q = 1
    CHECK_THROWS_AS(transform::dl_empirical(spec, 1.0, 1.0, 100, short_grid, {}, 1),
                    ParameterError);
}

TEST_CASE("dl_empirical flags a grid too coarse for its Monte Carlo precision") {
    // With many replicas per node the statistical error is tiny, so the
    // 8-node trapezoid bias dominates and must be reported, not absorbed.
    const auto spec = cp_exp();
    const auto grid = transform::default_time_grid(1.0, 8);
    CHECK_THROWS_AS(transform::dl_empirical(spec, 1.0, 1.0, 60000, grid, {}, 3), NumericError);
}

TEST_CASE("scaled double-Laplace values converge to the two-parameter limit (theoretical)") {
    const std::vector<double> s_list = {1e2, 1e4, 1e6, 1e8};
    const auto rows = transform::scaled_dl_limit_check(stable_half(), 0.5, constant_ell(),
                                                       sqrt_decay(), 1.0, 1.0, s_list);
    REQUIRE(rows.size() == s_list.size());
    CHECK(rows[0].limit == doctest::Approx(1.0).epsilon(1e-12));
    double prev_gap = 1e9;
    for (const auto& r : rows) {
        const double gap = std::abs(r.normalized / r.limit - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-3);

    const auto rows4 = transform::scaled_dl_limit_check(stable_half(), 0.5, constant_ell(),
                                                        sqrt_decay(), 4.0, 1.0, s_list);
    CHECK(rows4[0].limit == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaled double-Laplace check enforces the hypothesis gates") {
    const std::vector<double> s_list = {1e2, 1e4};
    CHECK_THROWS_AS(transform::scaled_dl_limit_check(cp_exp(), 0.5, constant_ell(), sqrt_decay(),
                                                     1.0, 1.0, s_list),
                    HypothesisError);
    regvar::LevelFraction constant_c;
    constant_c.kind = regvar::LevelFraction::Kind::constant;
    constant_c.param = 0.5;
    CHECK_THROWS_AS(transform::scaled_dl_limit_check(stable_half(), 0.5, constant_ell(),
                                                     constant_c, 1.0, 1.0, s_list),
                    HypothesisError);
}

TEST_CASE("scaled double-Laplace empirical mode tracks the theoretical value") {
    transform::ScaledDlParams params;
    params.mode = transform::DlMode::empirical;
    params.n = 400;
    params.nodes = 48;
    params.seed = 5;
    const std::vector<double> s_list = {100.0};
    const auto emp = transform::scaled_dl_limit_check(stable_half(), 0.5, constant_ell(),
                                                      sqrt_decay(), 1.0, 1.0, s_list, params);
    const auto theo = transform::scaled_dl_limit_check(stable_half(), 0.5, constant_ell(),
                                                       sqrt_decay(), 1.0, 1.0, s_list);
    REQUIRE(emp.size() == 1);
    CHECK(emp[0].limit == theo[0].limit);
    // Loose envelope: Monte Carlo with n=400 per node plus truncation bias.
    CHECK(std::abs(emp[0].normalized - theo[0].normalized) / theo[0].normalized <= 0.15);
}
