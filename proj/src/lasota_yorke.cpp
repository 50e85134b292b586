#include "cspec/lasota_yorke.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cspec {

bool hook(int n, int l, double lambda) {
    if (n < 0 || l < 0) throw std::invalid_argument("hook: block indices must be >= 0");
    return std::ldexp(1.0, n) <= std::ldexp(1.0, l + 4) / lambda;
}

std::vector<GridFunction> random_band_limited_corpus(std::size_t grid_n, long max_freq, int count,
                                                     Rng& rng) {
    if (max_freq >= static_cast<long>(grid_n) / 2)
        throw std::invalid_argument("random_band_limited_corpus: band exceeds the grid range");
    std::vector<GridFunction> corpus;
    corpus.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::vector<cplx> c(grid_n, cplx(0.0, 0.0));
        const int profile = i % 3;
        long lo = 0, hi = max_freq;
        if (profile == 2) {
            // single dyadic octave
            const int top = top_block(static_cast<std::size_t>(2 * max_freq));
            const int b = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(top + 1));
            lo = b == 0 ? 0 : (1L << (b - 1));
            hi = std::min(max_freq, 2L << b);
        }
        for (long k = -hi; k <= hi; ++k) {
            if (std::labs(k) < lo) continue;
            double scale = 1.0;
            if (profile == 1) scale = 1.0 / (1.0 + std::abs(static_cast<double>(k)));
            c[coeff_slot(k, grid_n)] = scale * rng.normal_cplx();
        }
        corpus.push_back(GridFunction::from_coefficients(grid_n, c));
    }
    return corpus;
}

double block_projector_norm_bound(double p, std::size_t grid_n, int corpus_size,
                                  std::uint64_t seed) {
    Rng rng(seed);
    const int nb = top_block(grid_n);
    std::vector<DyadicFilter> filters;
    for (int n = 0; n <= nb; ++n)
        filters.push_back(DyadicFilter::build(n, FilterKind::standard, static_cast<long>(grid_n) / 2));

    double best = 0.0;
    auto probe = [&](const GridFunction& u) {
        const double den = lp_norm(u, p);
        if (den <= 0.0) return;
        for (const auto& f : filters)
            best = std::max(best, lp_norm(dyadic_block(u, f), p) / den);
    };

    for (const auto& u : random_band_limited_corpus(grid_n, static_cast<long>(grid_n) / 2 - 1,
                                                    corpus_size, rng))
        probe(u);

    // Extremal probes: the sign pattern of the block kernel and a one-node
    // spike realize the exact discrete operator norm for p = 1 and p = inf.
    for (const auto& f : filters) {
        std::vector<cplx> kernel(grid_n);  // (1/N) sum_k psi(|k|) e^{2 pi i k j / N}
        for (std::size_t j = 0; j < grid_n; ++j)
            kernel[j] = f.value(slot_freq(j, grid_n)) / static_cast<double>(grid_n);
        detail::fft(kernel, +1);
        std::vector<cplx> sign_samples(grid_n);
        for (std::size_t j = 0; j < grid_n; ++j)
            sign_samples[j] = kernel[j].real() >= 0.0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
        probe(GridFunction::from_samples(sign_samples));
    }
    std::vector<cplx> spike(grid_n, cplx(0.0, 0.0));
    spike[0] = cplx(1.0, 0.0);
    probe(GridFunction::from_samples(spike));
    return best;
}

namespace {

double min_iterate_deriv(const CircleMap& map, int m) {
    const LyapunovSequence seq = min_lyapunov(map, m);
    return std::exp(m * seq.values[m - 1]);
}

double branch_jacobian_sum_sup(const CircleMap& map, int m, int grid = 1 << 10) {
    double sup = 0.0;
    for (int j = 0; j < grid; ++j) {
        const double x = static_cast<double>(j) / grid;
        double acc = 0.0;
        for (double y : inverse_branches_iterate(map, x, m))
            acc += 1.0 / std::abs(map.iterate_deriv(y, m));
        sup = std::max(sup, acc);
    }
    return sup;
}

}  // namespace

LYConstants ly_constants(const CircleMap& map, const Weight& weight, double s, double p, double q,
                         double sigma, int iterate, std::size_t c1_grid, int c1_corpus,
                         std::uint64_t seed) {
    if (iterate < 1) throw std::invalid_argument("ly_constants: iterate must be >= 1");
    LYConstants k;
    k.s = s;
    k.p = p;
    k.q = q;
    k.sigma = sigma;
    k.iterate = iterate;
    k.lambda = min_iterate_deriv(map, iterate);
    const double weighted_sup = growth_sup(weight, map, iterate);
    if (p == 1.0) {
        k.alpha = weighted_sup;
    } else {
        const double inv_p_prime = 1.0 - (p == kInf ? 0.0 : 1.0 / p);
        k.alpha = std::pow(branch_jacobian_sum_sup(map, iterate), inv_p_prime) * weighted_sup;
    }
    k.c1 = block_projector_norm_bound(p, c1_grid, c1_corpus, seed);
    k.gamma_tilde = k.c1 * std::pow(2.0, 5.0 * s) / (1.0 - std::pow(2.0, -s));
    k.chart_multiplier_norm = 1.0;
    k.gamma = k.chart_multiplier_norm * k.gamma_tilde;
    return k;
}

BlockNorms block_norms(const TransferOp& op, const GridFunction& u, int n_max, double p,
                       double lambda, int iterate) {
    const std::size_t grid_n = u.size();
    const int l_top = top_block(grid_n);
    if (n_max < 0) throw std::invalid_argument("block_norms: n_max must be >= 0");

    // Image coefficients of every dyadic piece of u. Pieces with no energy
    // (relative to u) are skipped rather than pushed through the operator.
    std::vector<std::vector<cplx>> w_coeffs(l_top + 1);
    const std::vector<cplx> uc = u.coefficients();
    double u_energy = 0.0;
    for (const auto& c : uc) u_energy += std::norm(c);
    for (int l = 0; l <= l_top; ++l) {
        std::vector<cplx> cl(grid_n);
        double energy = 0.0;
        for (std::size_t j = 0; j < grid_n; ++j) {
            cl[j] = uc[j] * psi(l, static_cast<double>(std::labs(slot_freq(j, grid_n))));
            energy += std::norm(cl[j]);
        }
        if (energy <= 1e-26 * u_energy) {
            w_coeffs[l].assign(grid_n, cplx(0.0, 0.0));
            continue;
        }
        const GridFunction wl =
            apply_power(op, GridFunction::from_coefficients(grid_n, cl), iterate);
        w_coeffs[l] = wl.coefficients();
    }

    // The hooked set is an upper tail in l: prefix sums give the non-hooked
    // (high) part without cancellation, suffix sums the hooked (low) part.
    std::vector<std::vector<cplx>> suffix(l_top + 2, std::vector<cplx>(grid_n, cplx(0.0, 0.0)));
    std::vector<std::vector<cplx>> prefix(l_top + 2, std::vector<cplx>(grid_n, cplx(0.0, 0.0)));
    for (int l = l_top; l >= 0; --l) {
        suffix[l] = suffix[l + 1];
        for (std::size_t j = 0; j < grid_n; ++j) suffix[l][j] += w_coeffs[l][j];
    }
    for (int l = 0; l <= l_top; ++l) {
        prefix[l + 1] = prefix[l];
        for (std::size_t j = 0; j < grid_n; ++j) prefix[l + 1][j] += w_coeffs[l][j];
    }

    const GridFunction lu_direct = apply_power(op, u, iterate);
    const std::vector<cplx> lu_coeffs = lu_direct.coefficients();
    const double lu_norm = std::sqrt([&] {
        double e = 0.0;
        for (const auto& c : lu_coeffs) e += std::norm(c);
        return e;
    }());

    BlockNorms out;
    out.low.resize(n_max + 1);
    out.high.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        int first_hooked = 0;
        while (first_hooked <= l_top && !hook(n, first_hooked, lambda)) ++first_hooked;
        const std::vector<cplx>& low_src = suffix[std::min(first_hooked, l_top + 1)];
        const std::vector<cplx>& high_src = prefix[std::min(first_hooked, l_top + 1)];

        std::vector<cplx> low_c(grid_n), high_c(grid_n), direct_c(grid_n);
        for (std::size_t j = 0; j < grid_n; ++j) {
            const double m = psi(n, static_cast<double>(std::labs(slot_freq(j, grid_n))));
            low_c[j] = m * low_src[j];
            high_c[j] = m * high_src[j];
            direct_c[j] = m * lu_coeffs[j];
        }
        const GridFunction low_f = GridFunction::from_coefficients(grid_n, low_c);
        const GridFunction high_f = GridFunction::from_coefficients(grid_n, high_c);
        out.low[n] = lp_norm(low_f, p);
        out.high[n] = lp_norm(high_f, p);

        // Deviation of the split from Delta_n(L^m u). Normalized against the
        // input+image scale: per-block (or image-only) relative measures
        // degenerate on blocks or inputs the operator annihilates.
        double dev = 0.0;
        const GridFunction split = low_f + high_f;
        const GridFunction direct_f = GridFunction::from_coefficients(grid_n, direct_c);
        for (std::size_t j = 0; j < grid_n; ++j)
            dev += std::norm(split.samples()[j] - direct_f.samples()[j]);
        out.consistency =
            std::max(out.consistency, std::sqrt(dev) / (lu_norm + std::sqrt(u_energy) + 1e-300));
    }

    // Energy escaping past the original Nyquist, seen on a twice-finer grid.
    if (iterate == 1) {
        const GridFunction fine = apply_on_grid(op, u, 2 * grid_n);
        const std::vector<cplx> fc = fine.coefficients();
        double total_e = 0.0, beyond = 0.0;
        for (std::size_t j = 0; j < fc.size(); ++j) {
            const double e = std::norm(fc[j]);
            total_e += e;
            if (std::labs(slot_freq(j, fine.size())) > static_cast<long>(grid_n) / 2) beyond += e;
        }
        out.resolution_flag = total_e > 1e-20 * u_energy && beyond / total_e > 1e-8;
    }
    return out;
}

LYReport verify_lasota_yorke(const TransferOp& op, const BesovParams& params,
                             const std::vector<GridFunction>& corpus, int iterate,
                             std::uint64_t c1_seed) {
    params.validate_against_regularity(op.weight.regularity());
    if (corpus.empty()) throw std::invalid_argument("verify_lasota_yorke: empty corpus");

    const std::size_t grid_n = corpus.front().size();
    LYReport report;
    report.constants = ly_constants(op.map, op.weight, params.s, params.p, params.q, params.sigma,
                                    iterate, std::min<std::size_t>(grid_n, 512), 48, c1_seed);
    const int n_max = top_block(grid_n);
    const double bound_factor = report.constants.gamma_tilde * report.constants.alpha *
                                std::pow(report.constants.lambda, -params.s);

    BesovParams weak = params;
    weak.s = params.sigma;
    weak.sigma = 0.5 * params.sigma;

    report.pass = true;
    for (const auto& u : corpus) {
        if (u.size() != grid_n)
            throw std::invalid_argument("verify_lasota_yorke: corpus grids must agree");
        const BlockNorms bn = block_norms(op, u, n_max, params.p, report.constants.lambda, iterate);
        LYRecord rec;
        rec.besov_strong = besov_norm(u, params);
        rec.besov_weak = besov_norm(u, weak);
        std::vector<double> low_terms(n_max + 1), high_terms(n_max + 1);
        for (int n = 0; n <= n_max; ++n) {
            low_terms[n] = std::pow(2.0, params.s * n) * bn.low[n];
            high_terms[n] = std::pow(2.0, params.s * n) * bn.high[n];
        }
        rec.low_weighted = lq_aggregate(low_terms, params.q);
        rec.high_weighted = lq_aggregate(high_terms, params.q);
        rec.low_bound = bound_factor * rec.besov_strong;
        rec.high_ratio = rec.high_weighted > 0.0 && rec.besov_weak > 0.0
                             ? rec.high_weighted / rec.besov_weak
                             : 0.0;
        rec.pass = rec.low_weighted <= rec.low_bound * (1.0 + 1e-6);
        report.pass = report.pass && rec.pass;
        report.fitted_high_constant = std::max(report.fitted_high_constant, rec.high_ratio);
        report.max_consistency = std::max(report.max_consistency, bn.consistency);
        report.resolution_flag = report.resolution_flag || bn.resolution_flag;
        report.records.push_back(rec);
    }
    return report;
}

EssentialBound essential_radius_bound(const CircleMap& map, const Weight& weight, double s,
                                      int n_max) {
    // s = 0 is admitted as a diagnostic; the bound then collapses to the
    // growth-rate factor alone.
    if (!(s >= 0.0)) throw std::invalid_argument("essential_radius_bound: s must be >= 0");
    EssentialBound out;
    out.chi_seq = min_lyapunov(map, n_max);
    out.growth_seq = growth_rate(weight, map, n_max);
    out.chi_min = out.chi_seq.value;
    out.growth = out.growth_seq.value;
    out.bound = std::exp(-s * out.chi_min) * out.growth;
    return out;
}

ProbeReport essential_radius_probe(const TransferOp& op, double s,
                                   const std::vector<int>& truncations, int n_max_dyn,
                                   double match_tol, double margin) {
    ProbeReport report;
    report.bound = essential_radius_bound(op.map, op.weight, s, n_max_dyn).bound;
    report.margin = margin;
    report.spectrum = stable_eigenvalues(op, truncations, match_tol);

    for (const auto& se : report.spectrum.stable) {
        ProbeEntry e;
        e.value = se.value;
        e.modulus = std::abs(se.value);
        e.final_drift = se.drifts.empty() ? 0.0 : se.drifts.back();
        e.above_bound = e.modulus > report.bound + margin;
        report.entries.push_back(e);
    }
    // Unstable candidates strictly outside the bound are suspicious; so are
    // above-bound stable values that fail to be mutually isolated.
    for (const cplx& z : report.spectrum.rejected)
        if (std::abs(z) > report.bound + margin) report.flagged.push_back(z);
    const double isolation = 10.0 * match_tol;
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        if (!report.entries[i].above_bound) continue;
        for (std::size_t j = i + 1; j < report.entries.size(); ++j) {
            if (!report.entries[j].above_bound) continue;
            if (std::abs(report.entries[i].value - report.entries[j].value) < isolation)
                report.flagged.push_back(report.entries[j].value);
        }
    }
    report.consistent = report.flagged.empty();
    return report;
}

DivergenceDiagnostic high_sum_divergence(double r, double sigma, double q, double lambda,
                                         int n_max) {
    if (q == kInf) throw std::invalid_argument("high_sum_divergence: demonstration requires q < inf");
    DivergenceDiagnostic d;
    double acc = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        double a = 0.0;
        for (int l = 0; l <= n; ++l) {
            if (hook(n, l, lambda)) continue;  // non-hooked pairs have l < n here
            a += std::pow(2.0, r * n - sigma * l - r * std::max(n, l));
        }
        d.per_n.push_back(a);
        acc += std::pow(a, q);
        d.running_lq.push_back(std::pow(acc, 1.0 / q));
    }
    return d;
}

}  // namespace cspec
