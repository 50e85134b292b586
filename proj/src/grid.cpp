#include "cspec/grid.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace cspec {

namespace detail {

namespace {

struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;

    PlanEntry(std::size_t n, int sign) {
        buf = fftw_alloc_complex(n);
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    PlanEntry(const PlanEntry&) = delete;
    PlanEntry& operator=(const PlanEntry&) = delete;
    ~PlanEntry() {
        if (plan) fftw_destroy_plan(plan);
        if (buf) fftw_free(buf);
    }
};

// FFTW's planner is not thread-safe; keep one cached in-place plan per
// (size, direction) behind a mutex and copy data through its buffer.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::pair<std::size_t, int>, std::unique_ptr<PlanEntry>>& plan_cache() {
    static std::map<std::pair<std::size_t, int>, std::unique_ptr<PlanEntry>> cache;
    return cache;
}

}  // namespace

void fft(std::vector<cplx>& data, int sign) {
    const std::size_t n = data.size();
    if (n == 0) return;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto key = std::make_pair(n, sign);
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<PlanEntry>(n, sign)).first;
    const PlanEntry& e = *it->second;
    // std::complex<double> is layout-compatible with fftw_complex.
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    std::memcpy(e.buf, raw, n * sizeof(fftw_complex));
    fftw_execute(e.plan);
    std::memcpy(raw, e.buf, n * sizeof(fftw_complex));
}

}  // namespace detail

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_size(std::size_t n) {
    if (!is_pow2(n) || n < 8)
        throw std::invalid_argument("GridFunction: size must be a power of two >= 8");
}

}  // namespace

GridFunction::GridFunction(std::size_t n) {
    check_size(n);
    samples_.assign(n, cplx(0.0, 0.0));
}

GridFunction GridFunction::from_samples(std::vector<cplx> samples) {
    check_size(samples.size());
    GridFunction u(samples.size());
    u.samples_ = std::move(samples);
    return u;
}

GridFunction GridFunction::constant(std::size_t n, cplx value) {
    GridFunction u(n);
    for (auto& s : u.samples_) s = value;
    return u;
}

GridFunction GridFunction::exponential(std::size_t n, long k) {
    check_size(n);
    const long half = static_cast<long>(n) / 2;
    if (k < -half || k >= half)
        throw std::invalid_argument("GridFunction::exponential: frequency outside [-N/2, N/2)");
    GridFunction u(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ph = kTwoPi * static_cast<double>(k) * u.node(j);
        u.samples_[j] = cplx(std::cos(ph), std::sin(ph));
    }
    return u;
}

GridFunction GridFunction::from_coefficients(std::size_t n, const std::vector<cplx>& coeffs) {
    check_size(n);
    if (coeffs.size() != n)
        throw std::invalid_argument("from_coefficients: coefficient count must equal grid size");
    std::vector<cplx> data = coeffs;
    detail::fft(data, +1);  // unnormalized inverse
    return from_samples(std::move(data));
}

std::vector<cplx> GridFunction::coefficients() const {
    std::vector<cplx> data = samples_;
    detail::fft(data, -1);
    const double scale = 1.0 / static_cast<double>(size());
    for (auto& c : data) c *= scale;
    return data;
}

cplx GridFunction::interpolate(double x) const {
    return eval_coefficients(coefficients(), x);
}

GridFunction& GridFunction::operator+=(const GridFunction& rhs) {
    if (rhs.size() != size()) throw std::invalid_argument("GridFunction: size mismatch");
    for (std::size_t j = 0; j < size(); ++j) samples_[j] += rhs.samples_[j];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& rhs) {
    if (rhs.size() != size()) throw std::invalid_argument("GridFunction: size mismatch");
    for (std::size_t j = 0; j < size(); ++j) samples_[j] -= rhs.samples_[j];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx a) {
    for (auto& s : samples_) s *= a;
    return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
GridFunction operator*(cplx a, GridFunction u) { return u *= a; }

std::size_t coeff_slot(long k, std::size_t n) {
    const long half = static_cast<long>(n) / 2;
    if (k < -half || k >= half) throw std::out_of_range("coeff_slot: frequency outside grid range");
    return static_cast<std::size_t>(k >= 0 ? k : k + static_cast<long>(n));
}

long slot_freq(std::size_t j, std::size_t n) {
    const long jj = static_cast<long>(j);
    const long nn = static_cast<long>(n);
    return jj < nn / 2 ? jj : jj - nn;
}

cplx eval_coefficients(const std::vector<cplx>& coeffs, double x) {
    const std::size_t n = coeffs.size();
    const long half = static_cast<long>(n) / 2;
    const cplx z = std::polar(1.0, kTwoPi * x);
    const cplx zc = std::conj(z);
    // sum_{k=0}^{N/2-1} c_k z^k by Horner, descending.
    cplx pos(0.0, 0.0);
    for (long k = half - 1; k >= 0; --k) pos = pos * z + coeffs[coeff_slot(k, n)];
    // sum_{k=1}^{N/2} c_{-k} zbar^k by Horner.
    cplx neg(0.0, 0.0);
    for (long k = half; k >= 1; --k) neg = (neg + coeffs[coeff_slot(-k, n)]) * zc;
    return pos + neg;
}

double rel_l2_error(const GridFunction& a, const GridFunction& b) {
    if (a.size() != b.size()) throw std::invalid_argument("rel_l2_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num += std::norm(a.samples()[j] - b.samples()[j]);
        den += std::norm(b.samples()[j]);
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

}  // namespace cspec
