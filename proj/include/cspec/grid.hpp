// Sampled 1-periodic functions on dyadic grids and their Fourier coefficients.
#ifndef CSPEC_GRID_HPP
#define CSPEC_GRID_HPP

#include <cstddef>
#include <vector>

#include "cspec/util.hpp"

namespace cspec {

/// Complex samples of a 1-periodic function at the nodes x_j = j/N.
///
/// N is a power of two, N >= 8. The represented function is the band-limited
/// interpolant u(x) = sum_{k=-N/2}^{N/2-1} c_k e^{2 pi i k x}; everything in
/// the library treats GridFunction as that trigonometric polynomial rather
/// than as bare samples.
class GridFunction {
public:
    explicit GridFunction(std::size_t n);
    static GridFunction from_samples(std::vector<cplx> samples);
    static GridFunction constant(std::size_t n, cplx value);
    /// Samples of e_k(x) = e^{2 pi i k x}; requires -N/2 <= k <= N/2-1.
    static GridFunction exponential(std::size_t n, long k);
    /// Build from coefficients indexed by k in {-N/2, ..., N/2-1}.
    static GridFunction from_coefficients(std::size_t n, const std::vector<cplx>& coeffs);

    std::size_t size() const { return samples_.size(); }
    double node(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(size()); }
    const std::vector<cplx>& samples() const { return samples_; }
    std::vector<cplx>& samples() { return samples_; }

    /// Fourier coefficients c_k in FFT slot order; use coeff_slot() to index by k.
    std::vector<cplx> coefficients() const;
    /// Band-limited evaluation at an arbitrary point (O(N) Horner).
    cplx interpolate(double x) const;

    GridFunction& operator+=(const GridFunction& rhs);
    GridFunction& operator-=(const GridFunction& rhs);
    GridFunction& operator*=(cplx a);

private:
    std::vector<cplx> samples_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(cplx a, GridFunction u);

/// Slot of frequency k (in {-N/2,...,N/2-1}) within an FFT-ordered array.
std::size_t coeff_slot(long k, std::size_t n);
/// Frequency of FFT slot j, in {-N/2, ..., N/2-1}.
long slot_freq(std::size_t j, std::size_t n);

/// Evaluate sum_k c_k e^{2 pi i k x} from FFT-ordered coefficients.
cplx eval_coefficients(const std::vector<cplx>& coeffs, double x);

/// Relative L2 distance between two grid functions on the same grid.
double rel_l2_error(const GridFunction& a, const GridFunction& b);

namespace detail {
/// In-place complex FFT, length a power of two. sign = -1 forward, +1 inverse
/// (unnormalized). Thread-safe; the plan cache is internally synchronized.
void fft(std::vector<cplx>& data, int sign);
}  // namespace detail

}  // namespace cspec

#endif
