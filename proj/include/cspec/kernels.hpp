// Oscillatory kernels of the block-transfer interaction on the line:
// real-space filter kernels, the collapsed kernel quadrature, and the
// convolution-majorant decay checks.
#ifndef CSPEC_KERNELS_HPP
#define CSPEC_KERNELS_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cspec/dyadic.hpp"

namespace cspec {

/// A smooth expanding local branch T on the line: T' bounded below by
/// c_tilde > 0 everywhere and a diffeomorphism on the working interval V.
/// Families: affine T(w) = a w + b (a > 1) and nonlinear
/// T(w) = a w + beta sin(w) (a - |beta| > 1).
class LocalBranch {
public:
    static LocalBranch affine(double a, double b, double v_lo = -1.0, double v_hi = 1.0);
    static LocalBranch nonlinear(double a, double beta, double v_lo = -1.0, double v_hi = 1.0);

    double eval(double w) const;
    double deriv(double w) const;
    double v_lo() const { return v_lo_; }
    double v_hi() const { return v_hi_; }
    double expansion_floor() const { return c_tilde_; }
    const std::string& family() const { return family_; }

private:
    LocalBranch() = default;
    std::string family_;
    double a_ = 2.0, b_ = 0.0;
    double v_lo_ = -1.0, v_hi_ = 1.0;
    double c_tilde_ = 2.0;
};

/// Smooth compactly supported local weight with a declared regularity tag.
/// bump is flat-C-infinity; cospower(m) has m-1 bounded derivatives at the
/// support edge and carries regularity m-1.
class LocalWeight {
public:
    static LocalWeight bump(double center, double radius, double regularity = 2.0);
    static LocalWeight cospower(double center, double radius, int power);

    double eval(double w) const;
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    double regularity() const { return regularity_; }
    const std::string& family() const { return family_; }

private:
    LocalWeight() = default;
    std::string family_;
    double center_ = 0.0, radius_ = 0.5;
    double lo_ = -0.5, hi_ = 0.5;
    double regularity_ = 2.0;
    int power_ = 0;  // 0 = bump
};

/// Real-space kernel of the dyadic multiplier: (1/2pi) int psi_n(|xi|)
/// e^{i t xi} d xi, tabulated densely by FFT and evaluated by cubic
/// interpolation. Real and even; the integral equals psi_n(0).
class FilterKernel {
public:
    static FilterKernel build(int n, FilterKind kind);
    /// Cached shared instance.
    static const FilterKernel& get(int n, FilterKind kind);

    double eval(double t) const;
    double integral() const;           // trapezoid over the table
    double peak() const { return peak_; }  // max |k|
    double step() const { return dt_; }
    double range() const { return half_range_; }
    /// Largest |imaginary part| seen while building (realness diagnostic).
    double max_imag() const { return max_imag_; }
    const std::vector<double>& samples() const { return samples_; }
    int block() const { return n_; }
    FilterKind kind() const { return kind_; }

private:
    int n_ = 0;
    FilterKind kind_ = FilterKind::standard;
    double dt_ = 0.0;
    double half_range_ = 0.0;
    double max_imag_ = 0.0;
    double peak_ = 0.0;
    std::vector<double> samples_;  // t = -half_range + i*dt
};

/// Convolution majorant: 1 for |x| <= 1, |x|^{-2} beyond (dimension 1).
double decay_majorant(double x);
/// Scaled copy 2^m b(2^m x), m >= 1.
double decay_majorant_scaled(int m, double x);
/// Numerical L^1 norm of the scaled majorant (quadrature + analytic tail);
/// independent of m by change of variables.
double decay_majorant_l1(int m);

/// Largest |T'| over the support of the weight (the stretch constant of the
/// non-hooked regime).
double branch_stretch(const LocalBranch& branch, const LocalWeight& weight);

/// Non-hooked pair test in the local setting: 2^n > Lambda * 2^{l+4}.
bool pair_not_hooked(int n, int l, double stretch);

/// Kernel values on an (x, y) product grid for one non-hooked pair.
struct KernelGrid {
    int n = 0, ell = 0;
    double stretch = 0.0;
    std::vector<double> xs, ys;
    std::vector<double> values;  // row-major, xs.size() x ys.size()
    double value(std::size_t i, std::size_t j) const { return values[i * ys.size() + j]; }
};

/// Single kernel value by the collapsed quadrature
///   (2 pi)^2 int k_n(x - w) G(w) k~_l(T(w) - T(y)) dw,
/// with Simpson step refinement until the relative change is < 1e-6.
/// Requires the pair to be non-hooked; throws otherwise.
double kernel_value(const LocalBranch& branch, const LocalWeight& weight, int n, int ell,
                    double x, double y);

KernelGrid kernel_grid(const LocalBranch& branch, const LocalWeight& weight, int n, int ell,
                       std::vector<double> xs, std::vector<double> ys);

/// Decay regimes of the kernel bound: the prefactor is 2^{-r max(n,l)} for
/// weights within a smoothness budget of the map, and 2^{min(n,l)-r max(n,l)}
/// for weights of regularity >= 1.
enum class DecayRegime { max_rate, min_shifted_rate };

double decay_prefactor(DecayRegime regime, double r, int n, int ell);

/// All non-hooked pairs with 1 <= l < n <= max_block.
std::vector<std::pair<int, int>> default_pair_budget(double stretch, int max_block = 10);

struct DecayRow {
    int n = 0, ell = 0;
    double c_fit = 0.0;  // max over the grid of |V| / (prefactor * b_min(x-y))
};

struct DecayTable {
    DecayRegime regime = DecayRegime::max_rate;
    double regularity = 0.0;
    std::vector<DecayRow> rows;
    double log2_slope = 0.0;  // least-squares slope of log2 c_fit vs max(n,l)
};

/// Fit the per-pair constants over precomputed kernel grids.
DecayTable decay_table(const std::vector<KernelGrid>& grids, DecayRegime regime, double r);

/// Default (x, y) grids centered on the weight support.
std::pair<std::vector<double>, std::vector<double>> default_kernel_grids(
    const LocalWeight& weight, std::size_t points = 25, double pad = 0.75);

struct YoungCheck {
    double measured = 0.0;  // ||H Phi||_p by quadrature
    double bound = 0.0;     // C * ||b||_1 * prefactor * ||Phi||_p
};

/// Apply the integral operator with kernel grid V to samples of Phi on the
/// grid's y nodes and compare with the convolution bound.
YoungCheck young_bound_check(const KernelGrid& grid, const std::vector<double>& phi_samples,
                             double p, double c_fit, DecayRegime regime, double r);

void write_kernel_csv(const KernelGrid& grid, std::ostream& os);
/// gnuplot-ready |V| heat data (x y |V| triples, blank line between x rows).
void write_kernel_heat(const KernelGrid& grid, std::ostream& os);

}  // namespace cspec

#endif
