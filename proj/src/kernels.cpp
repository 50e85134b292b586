#include "cspec/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "cspec/grid.hpp"

namespace cspec {

LocalBranch LocalBranch::affine(double a, double b, double v_lo, double v_hi) {
    if (!(a > 1.0)) throw std::invalid_argument("LocalBranch::affine: need slope > 1");
    if (!(v_lo < v_hi)) throw std::invalid_argument("LocalBranch: empty interval");
    LocalBranch t;
    t.family_ = "affine";
    t.a_ = a;
    t.b_ = b;
    t.v_lo_ = v_lo;
    t.v_hi_ = v_hi;
    t.c_tilde_ = a;
    return t;
}

LocalBranch LocalBranch::nonlinear(double a, double beta, double v_lo, double v_hi) {
    if (!(a - std::abs(beta) > 1.0))
        throw std::invalid_argument("LocalBranch::nonlinear: need a - |beta| > 1");
    if (!(v_lo < v_hi)) throw std::invalid_argument("LocalBranch: empty interval");
    LocalBranch t;
    t.family_ = "nonlinear";
    t.a_ = a;
    t.b_ = beta;
    t.v_lo_ = v_lo;
    t.v_hi_ = v_hi;
    t.c_tilde_ = a - std::abs(beta);
    return t;
}

double LocalBranch::eval(double w) const {
    if (family_ == "affine") return a_ * w + b_;
    return a_ * w + b_ * std::sin(w);
}

double LocalBranch::deriv(double w) const {
    if (family_ == "affine") return a_;
    return a_ + b_ * std::cos(w);
}

LocalWeight LocalWeight::bump(double center, double radius, double regularity) {
    if (!(radius > 0.0)) throw std::invalid_argument("LocalWeight: radius must be positive");
    LocalWeight g;
    g.family_ = "bump";
    g.center_ = center;
    g.radius_ = radius;
    g.lo_ = center - radius;
    g.hi_ = center + radius;
    g.regularity_ = regularity;
    g.power_ = 0;
    return g;
}

LocalWeight LocalWeight::cospower(double center, double radius, int power) {
    if (!(radius > 0.0)) throw std::invalid_argument("LocalWeight: radius must be positive");
    if (power < 2) throw std::invalid_argument("LocalWeight::cospower: power must be >= 2");
    LocalWeight g;
    g.family_ = "cospower";
    g.center_ = center;
    g.radius_ = radius;
    g.lo_ = center - radius;
    g.hi_ = center + radius;
    g.regularity_ = power - 1;
    g.power_ = power;
    return g;
}

double LocalWeight::eval(double w) const {
    const double u = (w - center_) / radius_;
    if (std::abs(u) >= 1.0) return 0.0;
    if (power_ == 0) return std::exp(-1.0 / (1.0 - u * u));
    return std::pow(std::cos(0.5 * kPi * u), power_);
}

// ---------------------------------------------------------------------------
// Filter kernels. Each block is tabulated by one FFT of the multiplier on a
// frequency grid sized so the kernel's periodization tails are negligible
// over the stored range.
// ---------------------------------------------------------------------------

FilterKernel FilterKernel::build(int n, FilterKind kind) {
    if (n < 0) throw std::invalid_argument("FilterKernel: block index must be >= 0");
    if (n > 14) throw std::invalid_argument("FilterKernel: block index beyond the desk-scale budget");
    FilterKernel k;
    k.n_ = n;
    k.kind_ = kind;
    const double dt = std::ldexp(1.0, -n) / 64.0;
    double half_range = 8.0 + 1024.0 * std::ldexp(1.0, -n);
    std::size_t m = 1;
    while (static_cast<double>(m) * dt < 2.0 * half_range) m *= 2;
    half_range = 0.5 * static_cast<double>(m) * dt;

    const double dxi = kTwoPi / (static_cast<double>(m) * dt);
    std::vector<cplx> a(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double xi = std::abs(static_cast<double>(slot_freq(j, m))) * dxi;
        a[j] = kind == FilterKind::standard ? psi(n, xi) : psi_wide(n, xi);
    }
    detail::fft(a, +1);  // sum_j a_j e^{+2 pi i j m / M}

    k.dt_ = dt;
    k.half_range_ = half_range;
    k.samples_.resize(m);
    const double scale = dxi / kTwoPi;
    for (std::size_t i = 0; i < m; ++i) {
        // natural order: t = (i - M/2) * dt lives in FFT slot (i - M/2) mod M
        const std::size_t slot = (i + m / 2) % m;
        k.samples_[i] = scale * a[slot].real();
        k.max_imag_ = std::max(k.max_imag_, scale * std::abs(a[slot].imag()));
        k.peak_ = std::max(k.peak_, std::abs(k.samples_[i]));
    }
    return k;
}

namespace {
std::mutex& kernel_cache_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

const FilterKernel& FilterKernel::get(int n, FilterKind kind) {
    static std::map<std::pair<int, int>, FilterKernel> cache;
    std::lock_guard<std::mutex> lock(kernel_cache_mutex());
    const auto key = std::make_pair(n, static_cast<int>(kind));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build(n, kind)).first;
    return it->second;
}

double FilterKernel::eval(double t) const {
    const double u = (t + half_range_) / dt_;
    const auto m = static_cast<long>(samples_.size());
    const long i = static_cast<long>(std::floor(u));
    if (i < 1 || i + 2 >= m) return 0.0;  // tails are below the table floor
    const double s = u - static_cast<double>(i);
    const double ym1 = samples_[i - 1], y0 = samples_[i], y1 = samples_[i + 1],
                 y2 = samples_[i + 2];
    // 4-point Lagrange interpolation at offsets -1, 0, 1, 2.
    const double c0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double c1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double c2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double c3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return c0 * ym1 + c1 * y0 + c2 * y1 + c3 * y2;
}

double FilterKernel::integral() const {
    double acc = 0.0;
    for (double v : samples_) acc += v;
    return acc * dt_;
}

double decay_majorant(double x) {
    const double a = std::abs(x);
    return a <= 1.0 ? 1.0 : 1.0 / (a * a);
}

double decay_majorant_scaled(int m, double x) {
    if (m < 1) throw std::invalid_argument("decay_majorant_scaled: m must be >= 1");
    const double s = std::ldexp(1.0, m);
    return s * decay_majorant(s * x);
}

double decay_majorant_l1(int m) {
    if (m < 1) throw std::invalid_argument("decay_majorant_l1: m must be >= 1");
    const double kink = std::ldexp(1.0, -m);
    const double cut = 4096.0 * kink;
    // flat part is exact; power tail integrated to `cut`, then analytically.
    const double flat = 2.0;  // 2 * 2^m * 2^-m
    const double tail_num = 2.0 * simpson_adaptive(
        [m](double x) { return decay_majorant_scaled(m, x); }, kink, cut, 1e-12, 1 << 10);
    const double tail_rest = 2.0 * kink / cut;
    return flat + tail_num + tail_rest;
}

double branch_stretch(const LocalBranch& branch, const LocalWeight& weight) {
    if (!(weight.support_lo() > branch.v_lo() && weight.support_hi() < branch.v_hi()))
        throw std::invalid_argument("branch_stretch: weight support must sit strictly inside V");
    double lam = 0.0;
    const int grid = 1 << 12;
    for (int j = 0; j <= grid; ++j) {
        const double w = weight.support_lo() +
                         (weight.support_hi() - weight.support_lo()) * j / grid;
        if (!(branch.deriv(w) > 0.0))
            throw std::invalid_argument("branch_stretch: branch not orientation-preserving on V");
        lam = std::max(lam, std::abs(branch.deriv(w)));
    }
    return lam;
}

bool pair_not_hooked(int n, int l, double stretch) {
    return std::ldexp(1.0, n) > stretch * std::ldexp(1.0, l + 4);
}

namespace {

struct QuadratureSetup {
    double lo = 0.0, hi = 0.0;
    int m0 = 64;
};

QuadratureSetup w_quadrature_setup(const LocalBranch& branch, const LocalWeight& weight, int n,
                                   int ell) {
    QuadratureSetup q;
    q.lo = weight.support_lo();
    q.hi = weight.support_hi();
    const double width = q.hi - q.lo;
    const double stretch = branch_stretch(branch, weight);
    const double osc_rate = std::ldexp(1.0, n + 1) + stretch * std::ldexp(1.0, ell + 2);
    q.m0 = static_cast<int>(width * osc_rate * 8.0 / kTwoPi) + 64;
    const double margin = std::min(q.lo - branch.v_lo(), branch.v_hi() - q.hi);
    if (!(margin > 0.0) || margin < 4.0 * width / q.m0)
        throw std::invalid_argument("kernel quadrature: weight support margin too small");
    return q;
}

}  // namespace

double kernel_value(const LocalBranch& branch, const LocalWeight& weight, int n, int ell,
                    double x, double y) {
    const double stretch = branch_stretch(branch, weight);
    if (!pair_not_hooked(n, ell, stretch))
        throw std::invalid_argument("kernel_value: pair is hooked; kernel bound regime requires"
                                    " 2^n > stretch * 2^{l+4}");
    const FilterKernel& kn = FilterKernel::get(n, FilterKind::standard);
    const FilterKernel& kl = FilterKernel::get(ell, FilterKind::wide);
    const double ty = branch.eval(y);
    const auto integrand = [&](double w) {
        return kn.eval(x - w) * weight.eval(w) * kl.eval(branch.eval(w) - ty);
    };
    const QuadratureSetup q = w_quadrature_setup(branch, weight, n, ell);
    const double scale = kTwoPi * kTwoPi;
    // Roundoff plateau of the quadrature sum; oscillatory cancellation cannot
    // be resolved below it, so fully cancelled values stop there instead of
    // chasing 1e-6 relative accuracy forever.
    const double magnitude = scale * kn.peak() * kl.peak() * (q.hi - q.lo);
    const double floor = 1e-15 * magnitude;
    double prev = scale * simpson(integrand, q.lo, q.hi, q.m0);
    double cur = prev;
    for (int m = 2 * q.m0; m <= 64 * q.m0; m *= 2) {
        cur = scale * simpson(integrand, q.lo, q.hi, m);
        if (std::abs(cur - prev) <= std::max(1e-6 * std::abs(cur), floor)) return cur;
        prev = cur;
    }
    if (std::abs(cur - prev) > std::max(1e-2 * std::abs(cur), 1e-12 * magnitude))
        throw std::runtime_error("kernel_value: quadrature did not converge");
    return cur;
}

KernelGrid kernel_grid(const LocalBranch& branch, const LocalWeight& weight, int n, int ell,
                       std::vector<double> xs, std::vector<double> ys) {
    KernelGrid g;
    g.n = n;
    g.ell = ell;
    g.stretch = branch_stretch(branch, weight);
    if (!pair_not_hooked(n, ell, g.stretch))
        throw std::invalid_argument("kernel_grid: pair is hooked");
    g.xs = std::move(xs);
    g.ys = std::move(ys);
    g.values.resize(g.xs.size() * g.ys.size());
    for (std::size_t i = 0; i < g.xs.size(); ++i)
        for (std::size_t j = 0; j < g.ys.size(); ++j)
            g.values[i * g.ys.size() + j] = kernel_value(branch, weight, n, ell, g.xs[i], g.ys[j]);
    return g;
}

double decay_prefactor(DecayRegime regime, double r, int n, int ell) {
    const int mx = std::max(n, ell);
    const int mn = std::min(n, ell);
    if (regime == DecayRegime::max_rate) return std::pow(2.0, -r * mx);
    return std::pow(2.0, mn - r * mx);
}

std::vector<std::pair<int, int>> default_pair_budget(double stretch, int max_block) {
    std::vector<std::pair<int, int>> pairs;
    for (int ell = 1; ell < max_block; ++ell)
        for (int n = ell + 1; n <= max_block; ++n)
            if (pair_not_hooked(n, ell, stretch)) pairs.emplace_back(n, ell);
    return pairs;
}

DecayTable decay_table(const std::vector<KernelGrid>& grids, DecayRegime regime, double r) {
    DecayTable t;
    t.regime = regime;
    t.regularity = r;
    for (const auto& g : grids) {
        DecayRow row;
        row.n = g.n;
        row.ell = g.ell;
        const double pref = decay_prefactor(regime, r, g.n, g.ell);
        const int m = std::max(1, std::min(g.n, g.ell));
        double c = 0.0;
        for (std::size_t i = 0; i < g.xs.size(); ++i)
            for (std::size_t j = 0; j < g.ys.size(); ++j) {
                const double den = pref * decay_majorant_scaled(m, g.xs[i] - g.ys[j]);
                c = std::max(c, std::abs(g.value(i, j)) / den);
            }
        row.c_fit = c;
        t.rows.push_back(row);
    }
    // Least squares of log2(c) against max(n, l); flat or falling passes.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    for (const auto& row : t.rows) {
        if (row.c_fit <= 0.0) continue;
        const double xv = std::max(row.n, row.ell);
        const double yv = std::log2(row.c_fit);
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
        ++cnt;
    }
    if (cnt >= 2 && cnt * sxx - sx * sx > 0.0)
        t.log2_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return t;
}

std::pair<std::vector<double>, std::vector<double>> default_kernel_grids(
    const LocalWeight& weight, std::size_t points, double pad) {
    const double lo = weight.support_lo() - pad;
    const double hi = weight.support_hi() + pad;
    std::vector<double> xs(points);
    for (std::size_t i = 0; i < points; ++i)
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return {xs, xs};
}

YoungCheck young_bound_check(const KernelGrid& grid, const std::vector<double>& phi_samples,
                             double p, double c_fit, DecayRegime regime, double r) {
    if (phi_samples.size() != grid.ys.size())
        throw std::invalid_argument("young_bound_check: phi must be sampled on the grid's y nodes");
    const double dy = grid.ys.size() > 1 ? grid.ys[1] - grid.ys[0] : 1.0;
    const double dx = grid.xs.size() > 1 ? grid.xs[1] - grid.xs[0] : 1.0;

    std::vector<double> image(grid.xs.size(), 0.0);
    for (std::size_t i = 0; i < grid.xs.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < grid.ys.size(); ++j)
            acc += grid.value(i, j) * phi_samples[j];
        image[i] = acc * dy;
    }

    auto line_lp = [&](const std::vector<double>& v, double step) {
        if (p == kInf) {
            double mx = 0.0;
            for (double t : v) mx = std::max(mx, std::abs(t));
            return mx;
        }
        double acc = 0.0;
        for (double t : v) acc += std::pow(std::abs(t), p);
        return std::pow(step * acc, 1.0 / p);
    };

    YoungCheck out;
    out.measured = line_lp(image, dx);
    const int m = std::max(1, std::min(grid.n, grid.ell));
    out.bound = c_fit * decay_majorant_l1(m) * decay_prefactor(regime, r, grid.n, grid.ell) *
                line_lp(phi_samples, dy);
    return out;
}

void write_kernel_csv(const KernelGrid& grid, std::ostream& os) {
    os << "n,ell,x,y,value\n";
    for (std::size_t i = 0; i < grid.xs.size(); ++i)
        for (std::size_t j = 0; j < grid.ys.size(); ++j)
            os << grid.n << "," << grid.ell << "," << format_full(grid.xs[i]) << ","
               << format_full(grid.ys[j]) << "," << format_full(grid.value(i, j)) << "\n";
}

void write_kernel_heat(const KernelGrid& grid, std::ostream& os) {
    for (std::size_t i = 0; i < grid.xs.size(); ++i) {
        for (std::size_t j = 0; j < grid.ys.size(); ++j)
            os << format_full(grid.xs[i]) << " " << format_full(grid.ys[j]) << " "
               << format_full(std::abs(grid.value(i, j))) << "\n";
        os << "\n";
    }
}

}  // namespace cspec
