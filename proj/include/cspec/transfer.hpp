// The weighted transfer operator on the circle: grid application by
// inverse-branch summation, Fourier-Galerkin matrices, and refinement-stable
// eigenvalue extraction.
#ifndef CSPEC_TRANSFER_HPP
#define CSPEC_TRANSFER_HPP

#include <iosfwd>
#include <vector>

#include "cspec/dynamics.hpp"
#include "cspec/grid.hpp"

namespace cspec {

/// (map, weight) pair defining (Lu)(x) = sum_{f(y)=x} g(y) u(y).
struct TransferOp {
    CircleMap map;
    Weight weight;

    TransferOp(CircleMap m, Weight w);
};

struct ApplyInfo {
    /// Fraction of u's energy in the top frequency octave.
    double top_energy_fraction = 0.0;
    /// Set when that fraction exceeds 1e-8: interpolation at preimages is
    /// then no longer trustworthy at full precision.
    bool degraded = false;
};

/// Pointwise application on u's grid; u is evaluated at preimages by
/// band-limited interpolation. Optional info reports input resolution.
GridFunction apply(const TransferOp& op, const GridFunction& u, ApplyInfo* info = nullptr);
/// Same, but sampling Lu on a grid of size out_n (>= u.size()).
GridFunction apply_on_grid(const TransferOp& op, const GridFunction& u, std::size_t out_n,
                           ApplyInfo* info = nullptr);
/// L^n u by repeated application (identical to the operator of (f^n, g^(n))).
GridFunction apply_power(const TransferOp& op, GridFunction u, int n);

/// | integral (Lu) phi - integral u (phi o f) g |f'| | by grid quadrature.
double duality_residual(const TransferOp& op, const GridFunction& u, const GridFunction& phi);

/// Dense Galerkin truncation: entry (m, j) is the m-th Fourier coefficient
/// of L e_j, computed on an assembly grid of size grid_n; indices run over
/// m, j in [-K, K]. The aliased flag records grid_n < 8K.
class FourierMatrix {
public:
    FourierMatrix(int truncation, std::size_t grid_n);

    int truncation() const { return k_; }
    std::size_t grid_size() const { return grid_n_; }
    bool aliased() const { return aliased_; }
    int dim() const { return 2 * k_ + 1; }

    cplx entry(int m, int j) const { return data_[slot(m, j)]; }
    void set_entry(int m, int j, cplx v) { data_[slot(m, j)] = v; }

    /// Center (2K'+1)^2 sub-block, K' <= K; entries are copied exactly.
    FourierMatrix restricted(int smaller_k) const;

private:
    std::size_t slot(int m, int j) const;
    int k_;
    std::size_t grid_n_;
    bool aliased_;
    std::vector<cplx> data_;
};

/// Assemble the truncation by applying L to each exponential and reading
/// coefficients off the assembly grid.
FourierMatrix fourier_matrix(const TransferOp& op, int truncation, std::size_t grid_n);

/// Full dense spectrum, sorted by modulus descending.
std::vector<cplx> eigenvalues(const FourierMatrix& m);

struct StableEigenvalue {
    cplx value;                    // value at the finest truncation
    std::vector<cplx> per_level;   // matched value at each truncation
    std::vector<double> drifts;    // |level i+1 - level i|
    bool drift_nonincreasing = false;
};

struct StableSpectrum {
    std::vector<int> truncations;
    std::vector<std::vector<cplx>> spectra;  // full spectrum per truncation level
    std::vector<StableEigenvalue> stable;    // sorted by modulus descending
    std::vector<cplx> rejected;              // finest-level candidates that failed matching
};

/// Match eigenvalues across >= 3 truncation levels (assembled on one shared
/// grid so smaller truncations are exact sub-blocks). A candidate from the
/// finest level is stable when a partner within match_tol exists at every
/// level and the drift sequence does not grow. Candidates below min_modulus
/// are ignored (the Galerkin kernel block contributes a spurious zero
/// cluster).
StableSpectrum stable_eigenvalues(const TransferOp& op, const std::vector<int>& truncations,
                                  double match_tol, double min_modulus = 1e-8);

/// Row-major CSV dump, complex entries as re,im pairs.
void write_matrix_csv(const FourierMatrix& m, std::ostream& os);

}  // namespace cspec

#endif
