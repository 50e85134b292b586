// Small shared utilities: deterministic RNG, quadrature, number formatting.
#ifndef CSPEC_UTIL_HPP
#define CSPEC_UTIL_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace cspec {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Deterministic 64-bit generator (splitmix-seeded xoshiro256**).
/// Hand-rolled so that streams are identical across platforms and
/// standard-library versions; reports depend on this for byte-stable output.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller.
    double normal();
    /// Complex with independent standard-normal parts.
    cplx normal_cplx();

private:
    std::uint64_t state_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Composite Simpson on [a, b] with m subintervals (m rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int m);

/// Simpson with interval doubling until |I_2m - I_m| <= tol * max(1, |I_2m|)
/// or the budget is hit. Returns the refined value.
double simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                        double tol, int m0 = 64, int max_m = 1 << 22);

/// Scientific notation with 17 significant digits (regression-diffable).
std::string format_full(double x);
std::string format_full(cplx z);

}  // namespace cspec

#endif
