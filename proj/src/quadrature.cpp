#include "sublab/quadrature.hpp"

#include <cmath>
#include <string>

#include "sublab/errors.hpp"

namespace sublab::quad {

namespace {

constexpr int kMaxOctavesDown = 1200;
constexpr int kMaxOctavesUp = 1100;
constexpr double kFloorX = 1e-300;

// Sum adaptive panels over [hi/2^(k+1), hi/2^k] going down until the octave
// contributions are negligible against the accumulated total.
double sum_octaves_down(const std::function<double(double)>& g, double hi, double rel_tol,
                        const char* what) {
    double acc = 0.0;
    double lo_edge = hi;
    int quiet = 0;
    double last = 0.0;
    for (int k = 0; k < kMaxOctavesDown; ++k) {
        const double lo = 0.5 * lo_edge;
        last = adaptive(g, lo, lo_edge, 0.1 * rel_tol);
        acc += last;
        lo_edge = lo;
        if (!std::isfinite(acc)) break;  // overflowed integrand: no convergence possible
        if (acc > 0.0 && last <= 0.1 * rel_tol * acc) {
            // acc == 0 must keep walking: a tail can vanish at large x (tempering
            // underflow, bounded support) long before its mass near 0 is reached.
            if (++quiet >= 2) return acc;
        } else {
            quiet = 0;
        }
        if (lo_edge < kFloorX) {
            if (acc == 0.0) return 0.0;  // identically zero all the way down
            break;
        }
    }
    throw NumericError(std::string(what) +
                       ": octave sums toward 0 did not converge (acc=" + std::to_string(acc) +
                       ", last octave=" + std::to_string(last) +
                       "); tail is non-integrable or too close to critical at 0");
}

}  // namespace

double exp_weighted_tail_integral(const std::function<double(double)>& tail, double lambda,
                                  double rel_tol) {
    if (!(lambda > 0.0)) {
        throw DomainError("exp_weighted_tail_integral requires lambda > 0");
    }
    auto g = [&](double x) { return std::exp(-lambda * x) * tail(x); };
    const double x0 = 1.0 / lambda;
    double acc = sum_octaves_down(g, x0, rel_tol, "exp_weighted_tail_integral");

    // Upward octaves: the exponential factor kills the integrand super-geometrically.
    double lo_edge = x0;
    int quiet = 0;
    for (int k = 0; k < kMaxOctavesUp; ++k) {
        const double hi = 2.0 * lo_edge;
        const double inc = adaptive(g, lo_edge, hi, 0.1 * rel_tol);
        acc += inc;
        lo_edge = hi;
        if (!std::isfinite(acc)) {
            throw NumericError(
                "exp_weighted_tail_integral: integrand overflowed in the upward octaves at "
                "lambda=" +
                std::to_string(lambda));
        }
        if (inc <= 0.1 * rel_tol * std::fmax(acc, 1e-300)) {
            if (++quiet >= 2) return acc;
        } else {
            quiet = 0;
        }
        if (lo_edge > 1e300) return acc;
    }
    throw NumericError("exp_weighted_tail_integral: upward octaves did not converge at lambda=" +
                       std::to_string(lambda));
}

double tail_integral_to(const std::function<double(double)>& tail, double eps, double rel_tol) {
    if (!(eps > 0.0)) {
        throw DomainError("tail_integral_to requires eps > 0");
    }
    return sum_octaves_down(tail, eps, rel_tol, "tail_integral_to");
}

}  // namespace sublab::quad
