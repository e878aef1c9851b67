#pragma once

namespace sublab::special {

/// Gamma function for z > 0. Throws DomainError otherwise.
double gamma_fn(double z);

/// log Gamma for z > 0. Throws DomainError otherwise.
double log_gamma(double z);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a), a > 0, x >= 0.
double reg_inc_gamma_upper(double a, double x);

/// Upper incomplete gamma Gamma(a, x).
double inc_gamma_upper(double a, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
/// Continued-fraction (modified Lentz) evaluation, relative accuracy ~1e-14.
double reg_inc_beta(double a, double b, double x);

}  // namespace sublab::special
