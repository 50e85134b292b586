// Acceptance suite: one line per criterion, [PASS]/[FAIL] with the measured
// quantities, nonzero exit when anything fails. Each criterion carries its
// wall-clock budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cspec/lasota_yorke.hpp"
#include "support/kernel_oracle.hpp"

using namespace cspec;

namespace {

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds; 0 = unbounded
    std::function<bool(std::string&)> run;
};

GridFunction random_band(std::size_t n, long band, Rng& rng) {
    std::vector<cplx> c(n, cplx(0.0, 0.0));
    for (long k = -band; k <= band; ++k) c[coeff_slot(k, n)] = rng.normal_cplx();
    return GridFunction::from_coefficients(n, c);
}

bool criterion_partition(std::string& msg) {
    double max_res = 0.0;
    for (long k = 0; k <= (1L << 12); ++k) {
        double sum = 0.0;
        for (int n = 0; n <= 12; ++n) sum += psi(n, static_cast<double>(k));
        max_res = std::max(max_res, std::abs(sum - 1.0));
    }
    Rng rng(2024);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const GridFunction u = random_band(256, 100, rng);
        GridFunction sum(256);
        for (int n = 0; n <= top_block(256); ++n) sum += dyadic_block(u, n);
        worst = std::max(worst, rel_l2_error(sum, u));
    }
    std::ostringstream os;
    os << "max partition residual " << max_res << " (<= 1e-12), worst reconstruction " << worst
       << " (<= 1e-10, 100 functions)";
    msg = os.str();
    return max_res <= 1e-12 && worst <= 1e-10;
}

bool criterion_single_mode(std::string& msg) {
    double worst = 0.0;
    for (double s : {0.5, 1.0, 1.5})
        for (double p : {1.0, kInf})
            for (double q : {1.0, kInf})
                for (int n = 0; n <= 10; ++n) {
                    BesovParams bp{s, p, q, s / 2, 0.5};
                    const GridFunction ek = GridFunction::exponential(4096, 1L << n);
                    const double expect = std::pow(2.0, s * n);
                    worst = std::max(worst, std::abs(besov_norm(ek, bp) - expect) / expect);
                }
    std::ostringstream os;
    os << "worst relative deviation from 2^{sn}: " << worst
       << " (<= 1e-10; n <= 10, s in {0.5,1,1.5}, all four p,q corners)";
    msg = os.str();
    return worst <= 1e-10;
}

bool criterion_duality(std::string& msg) {
    const CircleMap dbl = CircleMap::doubling();
    const CircleMap pert = CircleMap::perturbed(2, 0.1);
    std::vector<TransferOp> ops;
    ops.emplace_back(dbl, Weight::inverse_jacobian(dbl));
    ops.emplace_back(dbl, Weight::trig(0.2));
    ops.emplace_back(pert, Weight::inverse_jacobian(pert));
    ops.emplace_back(pert, Weight::trig(0.2));
    Rng rng(77);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const TransferOp& op = ops[t % ops.size()];
        worst = std::max(worst, duality_residual(op, random_band(256, 32, rng),
                                                 random_band(256, 32, rng)));
    }
    std::ostringstream os;
    os << "worst residual over 50 pairs: " << worst << " (<= 1e-8)";
    msg = os.str();
    return worst <= 1e-8;
}

bool criterion_doubling_spectrum(std::string& msg) {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp op(dbl, Weight::inverse_jacobian(dbl));
    const FourierMatrix m = fourier_matrix(op, 32, 256);
    double worst_entry = 0.0;
    for (int r = -32; r <= 32; ++r)
        for (int c = -32; c <= 32; ++c) {
            const double expect = (c == 2 * r) ? 1.0 : 0.0;
            worst_entry = std::max(worst_entry, std::abs(m.entry(r, c) - expect));
        }

    const auto ev = eigenvalues(m);
    const double lead_err = std::abs(ev[0] - cplx(1.0, 0.0));
    double cluster = 0.0;
    for (std::size_t i = 1; i < ev.size(); ++i) cluster = std::max(cluster, std::abs(ev[i]));

    const StableSpectrum ss = stable_eigenvalues(op, {8, 16, 32}, 1e-6);
    const bool stable_ok = ss.stable.size() == 1 &&
                           std::abs(ss.stable[0].value - cplx(1.0, 0.0)) <= 1e-10;
    double drift = 0.0;
    if (stable_ok)
        for (double d : ss.stable[0].drifts) drift = std::max(drift, d);

    std::ostringstream os;
    os << "entry error " << worst_entry << " (<= 1e-10), |lead-1| " << lead_err
       << " (<= 1e-10), zero-cluster scatter " << cluster
       << " (dense-solver realization of the exact zeros; <= 5e-3), stable set {1} drift "
       << drift << " (< 1e-10)";
    msg = os.str();
    return worst_entry <= 1e-10 && lead_err <= 1e-10 && cluster <= 5e-3 && stable_ok &&
           drift < 1e-10;
}

bool criterion_bound_arithmetic(std::string& msg) {
    const CircleMap dbl = CircleMap::doubling();
    const double b = essential_radius_bound(dbl, Weight::inverse_jacobian(dbl), 1.0, 12).bound;
    const double half_err = std::abs(b - 0.5);

    double worst_rel = 0.0;
    const Weight c = Weight::constant(0.7);
    for (double s : {0.5, 1.0, 2.0}) {
        const double thm = essential_radius_bound(dbl, c, s, 12).bound;
        const double gl = gundlach_latushkin_bound(dbl, c, s, 12);
        worst_rel = std::max(worst_rel, std::abs(thm - gl) / thm);
    }
    std::ostringstream os;
    os << "|bound - 0.5| = " << half_err << " (<= 1e-10), constant-family |thm-gl|/thm "
       << worst_rel << " (<= 1e-6, s in {0.5,1,2})";
    msg = os.str();
    return half_err <= 1e-10 && worst_rel <= 1e-6;
}

bool criterion_pressure(std::string& msg) {
    const CircleMap dbl = CircleMap::doubling();
    const PressureSequence seq = topological_pressure(dbl, [](double) { return 0.0; }, 12);
    const double exact = std::log(std::pow(2.0, 12) - 1.0) / 12.0;
    const double vs_log2 = std::abs(seq.last - std::log(2.0));
    const double vs_exact = std::abs(seq.last - exact);
    std::ostringstream os;
    os << "P_12 = " << seq.last << ", |P_12 - log 2| = " << vs_log2
       << " (<= 2e-4), |P_12 - (1/12)log(2^12-1)| = " << vs_exact << " (<= 1e-12)";
    msg = os.str();
    return vs_log2 <= 2e-4 && vs_exact <= 1e-12;
}

bool criterion_ly_low(std::string& msg) {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp op(dbl, Weight::constant(0.5));
    BesovParams bp{1.0, kInf, kInf, default_sigma(1.0, 2.0), 0.5};

    Rng rng(4242);
    std::vector<GridFunction> corpus = random_band_limited_corpus(1024, 256, 50, rng);
    for (long k = 0; k <= 256; ++k) corpus.push_back(GridFunction::exponential(1024, k));

    const LYReport rep = verify_lasota_yorke(op, bp, corpus);
    int violations = 0;
    double worst_ratio = 0.0;
    for (const auto& r : rep.records) {
        if (!r.pass) ++violations;
        if (r.low_bound > 0.0) worst_ratio = std::max(worst_ratio, r.low_weighted / r.low_bound);
    }
    std::ostringstream os;
    os << corpus.size() << " corpus members, violations " << violations
       << " (= 0), worst low/bound ratio " << worst_ratio << ", constants gamma_tilde "
       << rep.constants.gamma_tilde << " alpha " << rep.constants.alpha << " lambda "
       << rep.constants.lambda;
    msg = os.str();
    return violations == 0 && rep.pass;
}

bool criterion_high_constant(std::string& msg) {
    const CircleMap pert = CircleMap::perturbed(2, 0.1);
    const TransferOp op(pert, Weight::trig(0.2));
    BesovParams bp{1.0, kInf, kInf, default_sigma(1.0, 2.0), 0.5};

    Rng rng_a(555), rng_b(555);
    const std::vector<GridFunction> corpus1 = random_band_limited_corpus(512, 64, 50, rng_a);
    const std::vector<GridFunction> corpus2 = random_band_limited_corpus(512, 64, 100, rng_b);
    const double c1 = verify_lasota_yorke(op, bp, corpus1).fitted_high_constant;
    const double c2 = verify_lasota_yorke(op, bp, corpus2).fitted_high_constant;
    // the high part of an analytic expanding pair sits at the numerical noise
    // floor; stability is measured above that floor
    const double change = std::abs(c2 - c1) / std::max(c1, 1e-10);
    const bool stable = std::isfinite(c1) && std::isfinite(c2) && change <= 0.10;

    const DivergenceDiagnostic d = high_sum_divergence(1.0, 0.5, 1.0, 2.0, 20);
    bool grows = d.running_lq[20] > 5.0 * d.running_lq[4];
    for (std::size_t i = 6; i < d.running_lq.size(); ++i)
        grows = grows && d.running_lq[i] > d.running_lq[i - 1];

    std::ostringstream os;
    os << "fitted C 50-corpus " << c1 << ", 100-corpus " << c2 << ", change " << 100.0 * change
       << "% (<= 10%), s~=r q<inf running sum " << d.running_lq[4] << " -> " << d.running_lq[20]
       << " (unbounded growth)";
    msg = os.str();
    return stable && grows;
}

bool criterion_kernel_oracle(std::string& msg) {
    const LocalWeight g = LocalWeight::bump(0.0, 0.4, 2.0);
    const LocalBranch affine = LocalBranch::affine(2.0, 0.0);
    const LocalBranch nonlinear = LocalBranch::nonlinear(2.5, 0.4);

    struct Family {
        const LocalBranch* t;
        int n, l;
    };
    const Family families[] = {
        {&affine, 7, 1}, {&affine, 8, 1}, {&affine, 8, 2}, {&nonlinear, 7, 1}, {&nonlinear, 8, 1}};

    // For each family, rank a coarse sample of kernel values and check the
    // spread of live magnitudes; relative comparison at points of near-total
    // oscillatory cancellation would measure quadrature noise, not agreement.
    double worst = 0.0;
    double smallest_checked_fraction = 1.0;
    int checked = 0;
    for (const Family& fam : families) {
        struct Pt {
            double x, y, v;
        };
        std::vector<Pt> sample;
        for (double x : {-0.3, -0.1, 0.05, 0.2, 0.35})
            for (double y : {-0.45, -0.15, 0.0, 0.25, 0.5})
                sample.push_back({x, y, kernel_value(*fam.t, g, fam.n, fam.l, x, y)});
        std::sort(sample.begin(), sample.end(),
                  [](const Pt& a, const Pt& b) { return std::abs(a.v) > std::abs(b.v); });
        const double top = std::abs(sample.front().v);
        for (std::size_t idx : {0u, 3u, 6u, 9u, 12u}) {
            const Pt& p = sample[idx];
            const auto o = testsupport::kernel_oracle(*fam.t, g, fam.n, fam.l, p.x, p.y);
            worst = std::max(worst, std::abs(p.v - o.value) / std::abs(o.value));
            smallest_checked_fraction = std::min(smallest_checked_fraction, std::abs(p.v) / top);
            ++checked;
        }
    }
    std::ostringstream os;
    os << checked << " spot checks (affine + nonlinear), worst relative deviation " << worst
       << " (<= 1e-4); checked values span down to " << smallest_checked_fraction
       << " of each pair's peak";
    msg = os.str();
    return checked >= 20 && worst <= 1e-4;
}

bool criterion_kernel_decay(std::string& msg) {
    const LocalBranch t = LocalBranch::affine(2.0, 0.0);
    const LocalWeight smooth = LocalWeight::bump(0.0, 0.4, 2.0);
    const LocalWeight rough = LocalWeight::cospower(0.0, 0.4, 3);  // regularity 2

    double worst_slope = -kInf;
    for (const LocalWeight* w : {&smooth, &rough}) {
        const auto pairs = default_pair_budget(branch_stretch(t, *w), 10);
        const auto [xs, ys] = default_kernel_grids(*w, 21);
        std::vector<KernelGrid> grids;
        for (const auto& [n, l] : pairs) grids.push_back(kernel_grid(t, *w, n, l, xs, ys));
        for (DecayRegime regime : {DecayRegime::max_rate, DecayRegime::min_shifted_rate}) {
            const DecayTable table = decay_table(grids, regime, w->regularity());
            worst_slope = std::max(worst_slope, table.log2_slope);
        }
    }

    const double base = decay_majorant_l1(1);
    double worst_l1 = 0.0;
    for (int m = 2; m <= 8; ++m)
        worst_l1 = std::max(worst_l1, std::abs(decay_majorant_l1(m) - base));

    std::ostringstream os;
    os << "worst log2 slope over both regimes and both weight families " << worst_slope
       << " (<= 0.1), majorant L1 m-dependence " << worst_l1 << " (<= 1e-8)";
    msg = os.str();
    return worst_slope <= 0.1 && worst_l1 <= 1e-8;
}

bool criterion_leading_vs_pressure(std::string& msg) {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp op(dbl, Weight::trig(0.2));
    const StableSpectrum ss = stable_eigenvalues(op, {8, 16, 32}, 1e-6);
    if (ss.stable.empty()) {
        msg = "no stable eigenvalue found";
        return false;
    }
    const double lead = std::abs(ss.stable[0].value);
    const PressureSequence seq =
        topological_pressure(dbl, [](double x) { return 0.2 * std::cos(kTwoPi * x); }, 12);
    const double target = std::exp(seq.last);
    const double diff = std::abs(lead - target);
    const double last_step = std::abs(seq.values[11] - seq.values[10]);
    std::ostringstream os;
    os << "leading stable eigenvalue " << lead << ", exp(P_12(log g)) = " << target
       << ", difference " << diff << " (<= 5e-3; pressure last-step delta " << last_step << ")";
    msg = os.str();
    return diff <= 5e-3;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "partition of unity and reconstruction", 5.0, criterion_partition},
        {2, "single-mode Besov norms", 5.0, criterion_single_mode},
        {3, "transfer-operator duality", 10.0, criterion_duality},
        {4, "doubling-map exact spectrum", 5.0, criterion_doubling_spectrum},
        {5, "essential-radius bound arithmetic", 30.0, criterion_bound_arithmetic},
        {6, "pressure convergence", 10.0, criterion_pressure},
        {7, "strong-norm block bound", 60.0, criterion_ly_low},
        {8, "weak-norm constant stability and divergence demo", 0.0, criterion_high_constant},
        {9, "kernel quadrature vs product-grid oracle", 120.0, criterion_kernel_oracle},
        {10, "kernel decay rates and majorant scaling", 120.0, criterion_kernel_decay},
        {11, "leading eigenvalue vs pressure", 60.0, criterion_leading_vs_pressure},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
            ok = false;
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0.0 && secs > c.time_limit) {
            ok = false;
            detail += " [time budget exceeded]";
        }
        std::printf("[%s] criterion %2d (%s, %.2fs%s): %s\n", ok ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), secs,
                    c.time_limit > 0.0
                        ? (std::string(" / limit ") + std::to_string(c.time_limit).substr(0, 5) + "s").c_str()
                        : "",
                    detail.c_str());
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
