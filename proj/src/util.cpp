#include "cspec/util.hpp"

#include <cstdio>
#include <stdexcept>

namespace cspec {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

cplx Rng::normal_cplx() {
    const double re = normal();
    const double im = normal();
    return cplx(re, im);
}

double simpson(const std::function<double(double)>& f, double a, double b, int m) {
    if (m < 2) m = 2;
    if (m % 2 != 0) ++m;
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int j = 1; j < m; ++j) s += f(a + j * h) * (j % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                        double tol, int m0, int max_m) {
    double prev = simpson(f, a, b, m0);
    for (int m = 2 * m0; m <= max_m; m *= 2) {
        const double cur = simpson(f, a, b, m);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

std::string format_full(cplx z) {
    return format_full(z.real()) + "," + format_full(z.imag());
}

}  // namespace cspec
