#include "cspec/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspec {

namespace {

// h(x) = e^{-1/x} for x > 0, else 0; the standard flat mollifier piece.
double h(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

bool is_inf(double v) { return v == kInf; }

}  // namespace

double rho(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double a = h(2.0 - t);
    const double b = h(t - 1.0);
    return a / (a + b);
}

double psi(int n, double t) {
    if (n == 0) return rho(t);
    const double scale = std::ldexp(1.0, -n);  // 2^{-n}
    return rho(scale * t) - rho(2.0 * scale * t);
}

double psi_wide(int n, double t) {
    if (n == 0) return rho(0.5 * t);
    const double scale = std::ldexp(1.0, -n);
    return rho(0.5 * scale * t) - rho(4.0 * scale * t);
}

DyadicFilter DyadicFilter::build(int n, FilterKind kind, long max_freq) {
    if (n < 0) throw std::invalid_argument("DyadicFilter: block index must be >= 0");
    if (max_freq < 0) throw std::invalid_argument("DyadicFilter: max_freq must be >= 0");
    DyadicFilter f;
    f.n_ = n;
    f.kind_ = kind;
    f.values_.resize(static_cast<std::size_t>(max_freq) + 1);
    for (long k = 0; k <= max_freq; ++k) {
        const double t = static_cast<double>(k);
        f.values_[static_cast<std::size_t>(k)] =
            kind == FilterKind::standard ? psi(n, t) : psi_wide(n, t);
    }
    f.truncated_ = max_freq < 4L * (1L << n);
    return f;
}

double DyadicFilter::value(long k) const {
    const long a = std::labs(k);
    if (a >= static_cast<long>(values_.size()))
        throw std::out_of_range("DyadicFilter: frequency beyond tabulated range");
    return values_[static_cast<std::size_t>(a)];
}

int top_block(std::size_t n) {
    int b = -1;
    while (n > 1) {
        n >>= 1;
        ++b;
    }
    return b;
}

GridFunction dyadic_block(const GridFunction& u, const DyadicFilter& filter) {
    const std::size_t n = u.size();
    if (filter.max_freq() < static_cast<long>(n / 2))
        throw std::invalid_argument("dyadic_block: filter not resolved on the grid frequency range");
    std::vector<cplx> c = u.coefficients();
    for (std::size_t j = 0; j < n; ++j) c[j] *= filter.value(slot_freq(j, n));
    return GridFunction::from_coefficients(n, c);
}

GridFunction dyadic_block(const GridFunction& u, int n, FilterKind kind) {
    return dyadic_block(u, DyadicFilter::build(n, kind, static_cast<long>(u.size()) / 2));
}

double lp_norm(const GridFunction& u, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be in [1, inf]");
    if (is_inf(p)) {
        double m = 0.0;
        for (const auto& s : u.samples()) m = std::max(m, std::abs(s));
        return m;
    }
    double acc = 0.0;
    for (const auto& s : u.samples()) acc += std::pow(std::abs(s), p);
    return std::pow(acc / static_cast<double>(u.size()), 1.0 / p);
}

void BesovParams::validate() const {
    if (!(s > 0.0)) throw std::invalid_argument("BesovParams: s must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("BesovParams: p must be in [1, inf]");
    if (!(q >= 1.0)) throw std::invalid_argument("BesovParams: q must be in [1, inf]");
    if (!(sigma > 0.0 && sigma < s))
        throw std::invalid_argument("BesovParams: sigma must lie in (0, s)");
}

void BesovParams::validate_against_regularity(double r) const {
    validate();
    if (s > r) throw std::invalid_argument("BesovParams: s exceeds the weight regularity");
    if (!is_inf(q) && !(s < r))
        throw std::invalid_argument("BesovParams: finite q requires s strictly below the regularity");
    if (r > 1.0) {
        if (!(delta > 0.0 && delta < r - 1.0))
            throw std::invalid_argument("BesovParams: delta must lie in (0, regularity-1)");
        if (!(sigma > s - r + 1.0 + delta))
            throw std::invalid_argument("BesovParams: sigma violates the weak-exponent constraint");
    }
}

double default_sigma(double s, double r) {
    double lower = 0.0;
    if (r > 1.0) {
        const double delta = 0.5 * (r - 1.0);
        lower = s - r + 1.0 + delta;
    }
    if (lower < 0.0) lower = 0.0;
    if (0.5 * s > lower) return 0.5 * s;
    if (lower >= s)
        throw std::invalid_argument("default_sigma: no admissible weak exponent for these (s, regularity)");
    return lower + 0.25 * (s - lower);
}

double lq_aggregate(const std::vector<double>& terms, double q) {
    if (is_inf(q)) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double acc = 0.0;
    for (double t : terms) acc += std::pow(t, q);
    return std::pow(acc, 1.0 / q);
}

double besov_norm(const GridFunction& u, const BesovParams& params) {
    params.validate();
    const std::size_t n = u.size();
    const int nb = top_block(n);
    const std::vector<cplx> c = u.coefficients();
    std::vector<double> terms;
    terms.reserve(nb + 1);
    for (int b = 0; b <= nb; ++b) {
        std::vector<cplx> cb(n);
        for (std::size_t j = 0; j < n; ++j)
            cb[j] = c[j] * psi(b, static_cast<double>(std::labs(slot_freq(j, n))));
        const GridFunction block = GridFunction::from_coefficients(n, cb);
        terms.push_back(std::pow(2.0, params.s * b) * lp_norm(block, params.p));
    }
    return lq_aggregate(terms, params.q);
}

// ---------------------------------------------------------------------------
// Two-chart realization.
// Chart 0 covers a neighbourhood of 0 (unwrapped to (-0.35, 0.35)), chart 1 a
// neighbourhood of 1/2. The subordinate partition comes from bump quotients.
// ---------------------------------------------------------------------------

namespace {

constexpr double kChartRadius = 0.35;
constexpr double kChartCenter[2] = {0.0, 0.5};

double bump(double t) {
    const double a = 1.0 - t * t;
    return a > 0.0 ? std::exp(-1.0 / a) : 0.0;
}

double chart_window(int chart, double x) {
    return bump(atlas_chart_coord(chart, x) / kChartRadius);
}

/// Besov norm of a compactly supported line function sampled on a periodic
/// interval of the given length; frequencies are m / length cycles per unit.
double line_besov(const std::vector<cplx>& samples, double length, const BesovParams& params) {
    const std::size_t m = samples.size();
    std::vector<cplx> c = samples;
    detail::fft(c, -1);
    for (auto& z : c) z *= 1.0 / static_cast<double>(m);
    const int nb = top_block(m) - 1;  // top octave present at |freq| <= M/(2*length)
    std::vector<double> terms;
    for (int b = 0; b <= nb; ++b) {
        std::vector<cplx> cb(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double freq = std::abs(static_cast<double>(slot_freq(j, m))) / length;
            cb[j] = c[j] * psi(b, freq);
        }
        std::vector<cplx> block = cb;
        detail::fft(block, +1);
        double lp;
        if (params.p == kInf) {
            lp = 0.0;
            for (const auto& z : block) lp = std::max(lp, std::abs(z));
        } else {
            double acc = 0.0;
            for (const auto& z : block) acc += std::pow(std::abs(z), params.p);
            lp = std::pow(length * acc / static_cast<double>(m), 1.0 / params.p);
        }
        terms.push_back(std::pow(2.0, params.s * b) * lp);
    }
    return lq_aggregate(terms, params.q);
}

}  // namespace

double atlas_chart_coord(int chart, double x) {
    x -= std::floor(x);
    double t = x - kChartCenter[chart];
    if (t >= 0.5) t -= 1.0;
    if (t < -0.5) t += 1.0;
    return t;
}

double atlas_partition(int chart, double x) {
    const double w0 = chart_window(0, x);
    const double w1 = chart_window(1, x);
    const double w = chart == 0 ? w0 : w1;
    return w / (w0 + w1);
}

ChartedBesov besov_norm_charted(const GridFunction& u, const BesovParams& params) {
    params.validate();
    const std::size_t n = u.size();
    const std::size_t m = 4 * n;       // padded line grid
    const double length = 2.0;         // line window [-1, 1)
    const std::vector<cplx> coeffs = u.coefficients();

    ChartedBesov out;
    for (int chart = 0; chart < 2; ++chart) {
        std::vector<cplx> piece(m, cplx(0.0, 0.0));
        for (std::size_t j = 0; j < m; ++j) {
            const double t = -1.0 + length * static_cast<double>(j) / static_cast<double>(m);
            if (std::abs(t) >= kChartRadius) continue;  // outside the chart image
            const double x = t + kChartCenter[chart];   // kappa^{-1}(t), mod 1 below
            piece[j] = atlas_partition(chart, x) * eval_coefficients(coeffs, x);
        }
        out.chart_half[chart] = line_besov(piece, length, params);
    }
    out.total = out.chart_half[0] + out.chart_half[1];
    const double global = besov_norm(u, params);
    out.ratio_to_global = global > 0.0 ? out.total / global : 0.0;
    return out;
}

}  // namespace cspec
