// Expanding circle maps, weight families, cocycles, periodic orbits and
// thermodynamic estimators (pressure, Lyapunov exponents, growth rates).
#ifndef CSPEC_DYNAMICS_HPP
#define CSPEC_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cspec/util.hpp"

namespace cspec {

/// Degree-k expanding map of the circle with an explicit smooth lift.
/// Families: linear F(x) = kx and perturbed F(x) = kx + eps*sin(2 pi x)/(2 pi).
/// Construction verifies inf |f'| > 1 on a dense grid and the lift
/// equivariance F(x+1) = F(x) + k at sample points.
class CircleMap {
public:
    static CircleMap linear(int degree);
    static CircleMap perturbed(int degree, double eps);
    /// The doubling map f(x) = 2x mod 1.
    static CircleMap doubling() { return linear(2); }

    int degree() const { return degree_; }
    const std::string& family() const { return family_; }
    double parameter() const { return eps_; }

    /// Lift value F(x) (not reduced mod 1).
    double lift(double x) const;
    /// f(x) = F(x) mod 1 in [0, 1).
    double eval(double x) const;
    /// Derivative F'(x) of the lift.
    double deriv(double x) const;
    /// Derivative of the n-th iterate at x, prod_j f'(f^j x).
    double iterate_deriv(double x, int n) const;
    /// n-th iterate f^n(x) in [0, 1).
    double iterate(double x, int n) const;

    /// The inverse of branch i: the unique y in [0,1) with F(y) = x + i.
    double inverse_branch(int i, double x) const;

private:
    CircleMap() = default;
    std::string family_;
    int degree_ = 2;
    double eps_ = 0.0;
};

/// Exactly the k preimages of x under f, sorted ascending in [0, 1).
std::vector<double> inverse_branches(const CircleMap& map, double x);
/// Preimages of x under f^n (k^n points, unsorted word order).
std::vector<double> inverse_branches_iterate(const CircleMap& map, double x, int n);

/// Weight function g on the circle with a regularity tag used by the
/// admissibility checks. Families: constant, inverse_jacobian (1/|f'|),
/// trig (exp(a cos 2 pi x)). All families are smooth; the tag is the
/// regularity the weight is *declared* to have (>= 1 enforced).
class Weight {
public:
    static Weight constant(cplx c, double regularity = 2.0);
    static Weight inverse_jacobian(const CircleMap& map, double regularity = 2.0);
    static Weight trig(double a, double regularity = 2.0);

    cplx eval(double x) const;
    double regularity() const { return regularity_; }
    const std::string& family() const { return family_; }
    /// Grid infimum of |g|; used to guard logarithms.
    double min_abs(int grid = 1 << 12) const;

private:
    Weight() = default;
    std::string family_;
    double regularity_ = 2.0;
    std::function<cplx(double)> eval_;
};

/// g^(n)(x) = prod_{j=0}^{n-1} g(f^j(x)).
cplx cocycle(const Weight& g, const CircleMap& map, int n, double x);

/// Grid sup of |g^(n) * (f^n)'| with one refinement check (grid doubling
/// must move the value by < 1e-6, else the finer value is kept and the
/// sequence is still usable; linear families are exact at any grid).
double growth_sup(const Weight& g, const CircleMap& map, int n);

struct GrowthSequence {
    std::vector<double> roots;  // roots[i-1] = (sup |g^(i) (f^i)'|)^{1/i}
    double value = 0.0;         // the n_max-th root
};
/// The sequence R_n^{1/n} up to n_max; value is the last entry.
GrowthSequence growth_rate(const Weight& g, const CircleMap& map, int n_max);

struct LyapunovSequence {
    std::vector<double> values;  // values[i-1] = (1/i) log min |(f^i)'|
    double value = 0.0;          // the n_max-th entry
};
/// Minimal Lyapunov exponent estimates (1/n) log inf |(f^n)'| for n = 1..n_max,
/// by grid minimization with refinement; positive for expanding maps.
LyapunovSequence min_lyapunov(const CircleMap& map, int n_max);

struct PeriodicPoint {
    double point = 0.0;
    double multiplier = 1.0;        // (f^n)'(point)
    std::vector<double> orbit;      // point, f(point), ..., f^{n-1}(point)
};

struct OrbitSet {
    int period = 0;
    std::vector<PeriodicPoint> points;  // sorted by point, k^n - 1 entries
};

/// All fixed points of f^n, found by contracting each symbolic word of
/// inverse branches; the duplicated fixed word on the circle is removed so
/// the count is degree^n - 1. Throws when degree^n exceeds the budget.
OrbitSet periodic_points(const CircleMap& map, int n, std::uint64_t budget = 1ULL << 20);

struct PressureSequence {
    std::vector<double> values;  // values[i-1] = (1/i) log sum_{Fix f^i} e^{S_i phi}
    double last = 0.0;
    /// Limit estimate from Aitken acceleration of the log-partition-sum
    /// differences; equals `last` when fewer than four levels are available.
    double accelerated = 0.0;
};

/// Topological pressure estimates of the potential phi via periodic-orbit
/// sums for n = 1..n_max.
PressureSequence topological_pressure(const CircleMap& map,
                                      const std::function<double(double)>& phi, int n_max);

/// Thermodynamic bound exp P_top(log|g| - s log|f'|) in its one-dimensional
/// specialization, evaluated from the accelerated pressure estimate.
/// Throws std::domain_error when the weight vanishes somewhere.
double gundlach_latushkin_bound(const CircleMap& map, const Weight& g, double s, int n_max);

}  // namespace cspec

#endif
