#pragma once

#include <functional>
#include <string>
#include <variant>

namespace sublab::model {

// Jump-part families. A subordinator is drift + one jump family; the Lévy
// measure is described through its tail x -> Pi(x, inf).

struct StableFamily {
    double alpha;  // index in (0,1)
    double scale;  // c in Phi(lambda) = c * lambda^alpha
};

struct TemperedStableFamily {
    double alpha;
    double theta;  // tempering rate
    double scale;  // c in Phi(lambda) = c * ((lambda+theta)^alpha - theta^alpha)
};

struct ExponentialJumps {
    double mean;
};

struct ParetoJumps {
    double alpha;  // tail index (any positive value; this is the jump law, not Phi's index)
    double xmin;
};

struct CompoundPoissonFamily {
    double rate;
    std::variant<ExponentialJumps, ParetoJumps> jumps;
};

// Tail given as an evaluable monotone curve. When built from one of the named
// serializable forms, `recipe` holds the original JSON text so the spec can be
// round-tripped; specs built from a raw callable are not serializable.
struct TabulatedTailFamily {
    std::function<double(double)> tail;
    std::string label = "tabulated_tail";
    std::string recipe;
};

struct NoJumps {};

using Family = std::variant<StableFamily, TemperedStableFamily, CompoundPoissonFamily,
                            TabulatedTailFamily, NoJumps>;

/// Parametric subordinator description: drift coefficient plus jump family.
/// Construction validates parameter ranges, tail monotonicity and integrability
/// (numerically for TabulatedTail), and rejects the identically-zero process.
class SubordinatorSpec {
public:
    SubordinatorSpec(double drift, Family family);

    double drift() const { return drift_; }
    const Family& family() const { return family_; }

    /// Short family name for CSV/reporting: stable, tempered_stable,
    /// compound_poisson, tabulated_tail, none.
    std::string family_name() const;

private:
    double drift_;
    Family family_;
};

/// Laplace exponent Phi(lambda). Closed form where available (stable, tempered
/// stable, compound Poisson with exponential jumps, pure drift); adaptive
/// quadrature of exp(-lambda*x)*Pi(x,inf) otherwise.
double phi(const SubordinatorSpec& spec, double lambda);

/// Phi(lambda) forced through the tail-quadrature representation
/// lambda * (d + integral of exp(-lambda*x) * Pi(x,inf) dx).
double phi_quadrature(const SubordinatorSpec& spec, double lambda, double rel_tol = 1e-9);

/// Lévy tail Pi(x, inf) for x > 0.
double levy_tail(const SubordinatorSpec& spec, double x);

/// True for families with finitely many jumps per unit time.
bool finite_activity(const SubordinatorSpec& spec);

/// Evaluator object fixing the method choice.
struct LaplaceExponentEval {
    enum class Method { closed_form, quadrature_of_tail };

    SubordinatorSpec spec;
    Method method = Method::closed_form;

    double operator()(double lambda) const {
        return method == Method::closed_form ? phi(spec, lambda) : phi_quadrature(spec, lambda);
    }
};

}  // namespace sublab::model
