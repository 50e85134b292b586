// Littlewood-Paley dyadic filters, block projectors and Besov/L^p norms
// for sampled periodic functions.
#ifndef CSPEC_DYADIC_HPP
#define CSPEC_DYADIC_HPP

#include <vector>

#include "cspec/grid.hpp"

namespace cspec {

/// Smooth cutoff: 1 on (-inf, 1], 0 on [2, inf), C-infinity and nonincreasing
/// in between. Pinned to rho(t) = h(2-t) / (h(2-t) + h(t-1)), h(x) = e^{-1/x}.
double rho(double t);

/// Dyadic multiplier evaluated at a continuum frequency t = |xi| >= 0.
/// standard: psi_0 = rho(t), psi_n = rho(2^-n t) - rho(2^-n+1 t).
/// wide:     psi~_0 = rho(t/2), psi~_n = rho(2^-n-1 t) - rho(2^-n+2 t);
/// the wide multiplier is identically 1 on the support of the standard one.
double psi(int n, double t);
double psi_wide(int n, double t);

enum class FilterKind { standard, wide };

/// The multiplier psi_n (or psi~_n) tabulated at integer frequencies |k|.
class DyadicFilter {
public:
    /// Tabulate for |k| = 0..max_freq. The truncated flag records that
    /// max_freq < 2^{n+2}, i.e. the support may not be fully resolved.
    static DyadicFilter build(int n, FilterKind kind, long max_freq);

    int block() const { return n_; }
    FilterKind kind() const { return kind_; }
    long max_freq() const { return static_cast<long>(values_.size()) - 1; }
    bool truncated() const { return truncated_; }
    /// psi value at integer frequency k (by |k|).
    double value(long k) const;
    const std::vector<double>& values() const { return values_; }

private:
    int n_ = 0;
    FilterKind kind_ = FilterKind::standard;
    std::vector<double> values_;
    bool truncated_ = false;
};

/// Number of the top dyadic block resolved on a size-N grid: log2(N) - 1.
int top_block(std::size_t n);

/// Block projector Delta_n u = F^{-1}[psi_n F u] on u's grid.
GridFunction dyadic_block(const GridFunction& u, const DyadicFilter& filter);
/// Convenience: builds the filter for u's own frequency range.
GridFunction dyadic_block(const GridFunction& u, int n, FilterKind kind = FilterKind::standard);

/// Grid L^p norm, ((1/N) sum |u_j|^p)^{1/p}; max over samples for p = inf.
double lp_norm(const GridFunction& u, double p);

/// Exponent bundle for a Besov norm. p, q in [1, inf] with inf first-class;
/// sigma is the auxiliary weak exponent in (0, s) and delta the slack used
/// in its admissibility constraint for weights of regularity > 1.
struct BesovParams {
    double s = 1.0;
    double p = kInf;
    double q = kInf;
    double sigma = 0.5;
    double delta = 0.5;

    /// Throws std::invalid_argument unless s > 0, p,q in [1,inf],
    /// sigma in (0, s).
    void validate() const;
    /// Additionally checks compatibility with a weight of regularity r:
    /// s <= r (strict when q < inf), and sigma > s - r + 1 + delta when r > 1.
    void validate_against_regularity(double r) const;
};

/// Default weak exponent: s/2 when that already satisfies the regularity-r
/// constraint, otherwise a value a quarter of the way from the constraint's
/// lower limit (taken with delta = (r-1)/2) up to s.
double default_sigma(double s, double r);

/// Besov norm over blocks 0..top_block(N): the 2^{sn}-weighted l^q
/// aggregation of ||Delta_n u||_{L^p} (sup for q = inf).
double besov_norm(const GridFunction& u, const BesovParams& params);

/// l^q aggregation of an arbitrary per-block weighted-norm sequence.
double lq_aggregate(const std::vector<double>& terms, double q);

/// Per-chart breakdown of the two-chart realization of the norm.
struct ChartedBesov {
    double total = 0.0;
    double chart_half[2] = {0.0, 0.0};
    double ratio_to_global = 0.0;  // total / besov_norm(u), 0 when the latter is 0
};

/// Norm computed through the fixed two-interval cover of the circle with a
/// smooth subordinate partition of unity: each piece phi_i * u o kappa_i^{-1}
/// is placed on a padded non-periodic grid and measured with line-filter
/// frequencies. Equivalent to besov_norm only up to atlas-dependent
/// constants; the ratio is reported, never asserted.
ChartedBesov besov_norm_charted(const GridFunction& u, const BesovParams& params);

/// The two-chart atlas underlying besov_norm_charted, exposed for tests:
/// value of the partition function phi_i at circle point x.
double atlas_partition(int chart, double x);
/// Chart map kappa_i (circle point -> line coordinate); chart in {0, 1}.
double atlas_chart_coord(int chart, double x);

}  // namespace cspec

#endif
