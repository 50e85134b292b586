#include "cspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspec {

namespace {

// Grid large enough to resolve the oscillation scale of (f^n)'.
int dense_grid_size(int n) {
    const long long g = 1LL << std::min(19, n + 6);
    return static_cast<int>(std::max(g, 1LL << 12));
}

double mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r -= 1.0;
    return r;
}

double circle_dist(double a, double b) {
    const double d = std::abs(mod1(a) - mod1(b));
    return std::min(d, 1.0 - d);
}

}  // namespace

CircleMap CircleMap::linear(int degree) {
    if (degree < 2) throw std::invalid_argument("CircleMap: degree must be >= 2");
    CircleMap m;
    m.family_ = "linear";
    m.degree_ = degree;
    m.eps_ = 0.0;
    return m;
}

CircleMap CircleMap::perturbed(int degree, double eps) {
    if (degree < 2) throw std::invalid_argument("CircleMap: degree must be >= 2");
    CircleMap m;
    m.family_ = "perturbed";
    m.degree_ = degree;
    m.eps_ = eps;
    // Expansion check on a dense grid (f' = k + eps cos is exactly minimized
    // there, but keep the generic check so new families inherit it).
    const int g = 1 << 12;
    double dmin = kInf;
    for (int j = 0; j < g; ++j) dmin = std::min(dmin, m.deriv(static_cast<double>(j) / g));
    if (!(dmin > 1.0)) throw std::invalid_argument("CircleMap: map is not expanding");
    for (int j = 0; j < 64; ++j) {
        const double x = static_cast<double>(j) / 64.0;
        if (std::abs(m.lift(x + 1.0) - m.lift(x) - degree) > 1e-9)
            throw std::invalid_argument("CircleMap: lift is not degree-equivariant");
    }
    return m;
}

double CircleMap::lift(double x) const {
    if (family_ == "linear") return degree_ * x;
    return degree_ * x + eps_ * std::sin(kTwoPi * x) / kTwoPi;
}

double CircleMap::eval(double x) const { return mod1(lift(x)); }

double CircleMap::deriv(double x) const {
    if (family_ == "linear") return static_cast<double>(degree_);
    return degree_ + eps_ * std::cos(kTwoPi * x);
}

double CircleMap::iterate(double x, int n) const {
    double y = mod1(x);
    for (int j = 0; j < n; ++j) y = eval(y);
    return y;
}

double CircleMap::iterate_deriv(double x, int n) const {
    double y = mod1(x);
    double acc = 1.0;
    for (int j = 0; j < n; ++j) {
        acc *= deriv(y);
        y = eval(y);
    }
    return acc;
}

double CircleMap::inverse_branch(int i, double x) const {
    if (i < 0 || i >= degree_) throw std::invalid_argument("inverse_branch: branch index out of range");
    // Accepts x in [0, 1]; the endpoint is preserved (not wrapped) so that
    // contractions whose fixed point sits on the 0/1 seam converge.
    double xr = x;
    if (xr < 0.0 || xr > 1.0) xr -= std::floor(xr);
    const double target = xr + i;
    if (family_ == "linear") return target / degree_;
    // Monotone lift: F(0) = 0, F(1) = k. Safeguarded Newton on F(y) = target.
    double lo = 0.0, hi = 1.0;
    double y = target / degree_;
    for (int it = 0; it < 100; ++it) {
        const double r = lift(y) - target;
        if (r > 0.0)
            hi = y;
        else
            lo = y;
        const double step = r / deriv(y);
        double ynext = y - step;
        if (!(ynext > lo && ynext < hi)) ynext = 0.5 * (lo + hi);
        const double moved = std::abs(ynext - y);
        y = ynext;
        if (moved < 1e-15 && std::abs(lift(y) - target) < 1e-12) return y;
    }
    if (std::abs(lift(y) - target) < 1e-12) return y;
    throw std::runtime_error("inverse_branch: root finder failed to converge (malformed map?)");
}

std::vector<double> inverse_branches(const CircleMap& map, double x) {
    std::vector<double> out;
    out.reserve(map.degree());
    for (int i = 0; i < map.degree(); ++i) out.push_back(map.inverse_branch(i, x));
    return out;
}

std::vector<double> inverse_branches_iterate(const CircleMap& map, double x, int n) {
    std::vector<double> cur{mod1(x)};
    for (int step = 0; step < n; ++step) {
        std::vector<double> next;
        next.reserve(cur.size() * map.degree());
        for (double y : cur)
            for (int i = 0; i < map.degree(); ++i) next.push_back(map.inverse_branch(i, y));
        cur = std::move(next);
    }
    return cur;
}

Weight Weight::constant(cplx c, double regularity) {
    if (!(regularity >= 1.0)) throw std::invalid_argument("Weight: regularity must be >= 1");
    Weight w;
    w.family_ = "constant";
    w.regularity_ = regularity;
    w.eval_ = [c](double) { return c; };
    return w;
}

Weight Weight::inverse_jacobian(const CircleMap& map, double regularity) {
    if (!(regularity >= 1.0)) throw std::invalid_argument("Weight: regularity must be >= 1");
    Weight w;
    w.family_ = "inverse_jacobian";
    w.regularity_ = regularity;
    w.eval_ = [map](double x) { return cplx(1.0 / std::abs(map.deriv(x)), 0.0); };
    return w;
}

Weight Weight::trig(double a, double regularity) {
    if (!(regularity >= 1.0)) throw std::invalid_argument("Weight: regularity must be >= 1");
    Weight w;
    w.family_ = "trig";
    w.regularity_ = regularity;
    w.eval_ = [a](double x) { return cplx(std::exp(a * std::cos(kTwoPi * x)), 0.0); };
    return w;
}

cplx Weight::eval(double x) const { return eval_(x); }

double Weight::min_abs(int grid) const {
    double m = kInf;
    for (int j = 0; j < grid; ++j) m = std::min(m, std::abs(eval_(static_cast<double>(j) / grid)));
    return m;
}

cplx cocycle(const Weight& g, const CircleMap& map, int n, double x) {
    if (n < 1) throw std::invalid_argument("cocycle: n must be >= 1");
    cplx acc(1.0, 0.0);
    double y = x;
    for (int j = 0; j < n; ++j) {
        acc *= g.eval(y);
        y = map.eval(y);
    }
    return acc;
}

namespace {

double grid_sup_weighted(const Weight& g, const CircleMap& map, int n, int grid) {
    double sup = 0.0;
    for (int j = 0; j < grid; ++j) {
        const double x = static_cast<double>(j) / grid;
        double y = x;
        double mag = 1.0;
        for (int m = 0; m < n; ++m) {
            mag *= std::abs(g.eval(y)) * std::abs(map.deriv(y));
            y = map.eval(y);
        }
        sup = std::max(sup, mag);
    }
    return sup;
}

double grid_min_log_deriv(const CircleMap& map, int n, int grid) {
    double lo = kInf;
    for (int j = 0; j < grid; ++j) {
        const double x = static_cast<double>(j) / grid;
        double y = x;
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            acc += std::log(std::abs(map.deriv(y)));
            y = map.eval(y);
        }
        lo = std::min(lo, acc);
    }
    return lo;
}

// One refinement pass: doubles the grid until the value settles below 1e-6.
template <typename F>
double refine(F evalf, int grid0) {
    double prev = evalf(grid0);
    for (int grid = 2 * grid0; grid <= (1 << 21); grid *= 2) {
        const double cur = evalf(grid);
        if (std::abs(cur - prev) < 1e-6 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

double growth_sup(const Weight& g, const CircleMap& map, int n) {
    if (n < 1) throw std::invalid_argument("growth_sup: n must be >= 1");
    return refine([&](int grid) { return grid_sup_weighted(g, map, n, grid); }, dense_grid_size(n));
}

GrowthSequence growth_rate(const Weight& g, const CircleMap& map, int n_max) {
    GrowthSequence seq;
    for (int n = 1; n <= n_max; ++n)
        seq.roots.push_back(std::pow(growth_sup(g, map, n), 1.0 / n));
    seq.value = seq.roots.back();
    return seq;
}

LyapunovSequence min_lyapunov(const CircleMap& map, int n_max) {
    LyapunovSequence seq;
    for (int n = 1; n <= n_max; ++n) {
        const double lo = refine([&](int grid) { return grid_min_log_deriv(map, n, grid); },
                                 dense_grid_size(n));
        seq.values.push_back(lo / n);
    }
    seq.value = seq.values.back();
    return seq;
}

OrbitSet periodic_points(const CircleMap& map, int n, std::uint64_t budget) {
    if (n < 1) throw std::invalid_argument("periodic_points: period must be >= 1");
    const int k = map.degree();
    std::uint64_t words = 1;
    for (int j = 0; j < n; ++j) {
        words *= static_cast<std::uint64_t>(k);
        if (words > budget) throw std::invalid_argument("periodic_points: degree^n exceeds the budget");
    }

    std::vector<PeriodicPoint> found;
    found.reserve(words);
    std::vector<int> w(n);
    for (std::uint64_t code = 0; code < words; ++code) {
        std::uint64_t c = code;
        for (int j = n - 1; j >= 0; --j) {
            w[j] = static_cast<int>(c % k);
            c /= k;
        }
        // Fixed point of the composed inverse branches (a lambda^{-n} contraction).
        double x = 0.5;
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            double z = x;
            for (int j = n - 1; j >= 0; --j) z = map.inverse_branch(w[j], z);
            const double moved = circle_dist(z, x);
            x = z;
            if (moved < 1e-13) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw std::runtime_error("periodic_points: contraction failed (map not expanding?)");

        // One more sweep records the forward orbit: z_j = f^j(x*).
        PeriodicPoint pp;
        pp.orbit.assign(n, 0.0);
        double z = x;
        for (int j = n - 1; j >= 0; --j) {
            z = map.inverse_branch(w[j], z);
            pp.orbit[j] = z;
        }
        pp.point = mod1(pp.orbit[0]);
        pp.orbit[0] = pp.point;
        pp.multiplier = 1.0;
        for (double o : pp.orbit) pp.multiplier *= map.deriv(o);

        const double res = circle_dist(map.iterate(pp.point, n), pp.point);
        if (res > std::max(1e-10, std::abs(pp.multiplier) * 1e-14))
            throw std::runtime_error("periodic_points: fixed-point residual too large");
        found.push_back(std::move(pp));
    }

    std::sort(found.begin(), found.end(),
              [](const PeriodicPoint& a, const PeriodicPoint& b) { return a.point < b.point; });
    OrbitSet out;
    out.period = n;
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (!out.points.empty() && circle_dist(found[i].point, out.points.back().point) < 1e-10)
            continue;
        out.points.push_back(std::move(found[i]));
    }
    // The fixed word duplicated across the 0/1 seam.
    while (out.points.size() > 1 &&
           circle_dist(out.points.back().point, out.points.front().point) < 1e-10)
        out.points.pop_back();

    const std::uint64_t expected = words - 1;
    if (out.points.size() != expected)
        throw std::runtime_error("periodic_points: unexpected fixed-point count after dedup");
    return out;
}

PressureSequence topological_pressure(const CircleMap& map,
                                      const std::function<double(double)>& phi, int n_max) {
    if (n_max < 1) throw std::invalid_argument("topological_pressure: n_max must be >= 1");
    PressureSequence seq;
    std::vector<double> log_sums;
    for (int n = 1; n <= n_max; ++n) {
        const OrbitSet orbits = periodic_points(map, n);
        // log-sum-exp over Birkhoff sums.
        std::vector<double> birkhoff;
        birkhoff.reserve(orbits.points.size());
        double mx = -kInf;
        for (const auto& pp : orbits.points) {
            double s = 0.0;
            for (double o : pp.orbit) s += phi(o);
            birkhoff.push_back(s);
            mx = std::max(mx, s);
        }
        double acc = 0.0;
        for (double s : birkhoff) acc += std::exp(s - mx);
        const double log_sum = mx + std::log(acc);
        log_sums.push_back(log_sum);
        seq.values.push_back(log_sum / n);
    }
    seq.last = seq.values.back();

    // Differences of log partition sums converge geometrically; Aitken on the
    // last three gives the limit to well below the raw sequence error.
    if (log_sums.size() >= 4) {
        const std::size_t m = log_sums.size() - 1;
        const double d0 = log_sums[m - 2] - log_sums[m - 3];
        const double d1 = log_sums[m - 1] - log_sums[m - 2];
        const double d2 = log_sums[m] - log_sums[m - 1];
        const double denom = d2 - 2.0 * d1 + d0;
        if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(d2)))
            seq.accelerated = d2 - (d2 - d1) * (d2 - d1) / denom;
        else
            seq.accelerated = d2;
    } else {
        seq.accelerated = seq.last;
    }
    return seq;
}

double gundlach_latushkin_bound(const CircleMap& map, const Weight& g, double s, int n_max) {
    if (g.min_abs() < 1e-12)
        throw std::domain_error("gundlach_latushkin_bound: weight has (near-)zeros, log undefined");
    auto phi = [&](double x) {
        return std::log(std::abs(g.eval(x))) - s * std::log(std::abs(map.deriv(x)));
    };
    return std::exp(topological_pressure(map, phi, n_max).accelerated);
}

}  // namespace cspec
