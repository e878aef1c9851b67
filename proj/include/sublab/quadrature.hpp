#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace sublab::quad {

struct QuadResult {
    double value;
    double error;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1]. The Gauss points are the
// odd-indexed Kronrod abscissae plus the midpoint.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                  0.417959183673469};

}  // namespace detail

/// One Gauss-Kronrod 7-15 panel over [a, b]. error = |K15 - G7|.
template <class F>
QuadResult gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = detail::kWgk[7] * fc;
    double resg = detail::kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = half * detail::kXgk[j];
        const double fsum = f(center - x) + f(center + x);
        resk += detail::kWgk[j] * fsum;
        if (j % 2 == 1) resg += detail::kWg[j / 2] * fsum;
    }
    return {resk * half, std::fabs((resk - resg) * half)};
}

namespace detail {

template <class F>
double adaptive_impl(F& f, double a, double b, double abs_tol, int depth, int max_depth,
                     long long& panels_left, bool& converged) {
    const QuadResult r = gk15(f, a, b);
    --panels_left;
    if (!std::isfinite(r.value)) {
        converged = false;  // splitting cannot repair an overflowed/NaN panel
        return r.value;
    }
    if (r.error <= abs_tol || depth >= max_depth || panels_left <= 0) {
        if (r.error > abs_tol) converged = false;
        return r.value;
    }
    const double mid = 0.5 * (a + b);
    return adaptive_impl(f, a, mid, 0.5 * abs_tol, depth + 1, max_depth, panels_left, converged) +
           adaptive_impl(f, mid, b, 0.5 * abs_tol, depth + 1, max_depth, panels_left, converged);
}

}  // namespace detail

/// Adaptive bisection to a relative tolerance (with a tiny absolute floor).
/// Sets *ok = false if some panel hit max depth without meeting its budget.
/// Total work is capped at max_panels GK15 panels so that error estimates
/// stuck at the evaluation-noise floor degrade gracefully instead of
/// expanding the full bisection tree.
template <class F>
double adaptive(F&& f, double a, double b, double rel_tol, bool* ok = nullptr,
                double abs_floor = 1e-300, int max_depth = 48, long long max_panels = 10000) {
    const QuadResult rough = gk15(f, a, b);
    const double abs_tol = std::fmax(abs_floor, rel_tol * std::fabs(rough.value));
    bool converged = true;
    long long panels_left = max_panels;
    const double v = detail::adaptive_impl(f, a, b, abs_tol, 0, max_depth, panels_left, converged);
    if (ok) *ok = converged;
    return v;
}

/// Integral of exp(-lambda*x) * tail(x) over (0, infinity) for a nonnegative
/// non-increasing tail with a possibly singular (but integrable) behaviour at 0.
/// Octave decomposition anchored at x0 = 1/lambda; throws NumericError when the
/// octave sums fail to converge (non-integrable or near-critical singularity).
double exp_weighted_tail_integral(const std::function<double(double)>& tail, double lambda,
                                  double rel_tol = 1e-9);

/// Integral of tail(x) over (0, eps), same octave scheme toward 0.
double tail_integral_to(const std::function<double(double)>& tail, double eps,
                        double rel_tol = 1e-9);

}  // namespace sublab::quad
