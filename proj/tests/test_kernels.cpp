#include <doctest.h>

#include <cmath>

#include "cspec/kernels.hpp"
#include "support/kernel_oracle.hpp"

using namespace cspec;

TEST_CASE("local branch and weight guards") {
    CHECK_THROWS_AS(LocalBranch::affine(0.9, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LocalBranch::nonlinear(1.5, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(LocalWeight::bump(0.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(LocalWeight::cospower(0.0, 0.5, 1), std::invalid_argument);

    const LocalBranch t = LocalBranch::nonlinear(2.5, 0.4);
    CHECK(t.expansion_floor() == doctest::Approx(2.1));
    for (double w : {-0.9, -0.2, 0.4, 0.8})
        CHECK(t.deriv(w) >= t.expansion_floor() - 1e-12);

    const LocalWeight g = LocalWeight::cospower(0.1, 0.3, 4);
    CHECK(g.regularity() == doctest::Approx(3.0));
    CHECK(g.eval(0.1) == doctest::Approx(1.0));
    CHECK(g.eval(0.4) == 0.0);
    CHECK(g.eval(0.45) == 0.0);

    // expanding pair separation on sampled pairs
    const LocalWeight gb = LocalWeight::bump(0.0, 0.4);
    const double c = t.expansion_floor();
    for (double a = -0.4; a <= 0.4; a += 0.1)
        for (double b = a + 0.05; b <= 0.4; b += 0.1)
            CHECK(std::abs(t.eval(a) - t.eval(b)) > c * std::abs(a - b) * (1.0 - 1e-12));
    CHECK(branch_stretch(LocalBranch::affine(2.0, 0.3), gb) == doctest::Approx(2.0));
}

TEST_CASE("filter kernels: integral, realness, evenness, self-similarity") {
    const FilterKernel& k0 = FilterKernel::get(0, FilterKind::standard);
    CHECK(k0.integral() == doctest::Approx(1.0).epsilon(1e-10));
    const FilterKernel& k2 = FilterKernel::get(2, FilterKind::standard);
    CHECK(std::abs(k2.integral()) <= 1e-10);
    const FilterKernel& w1 = FilterKernel::get(1, FilterKind::wide);
    CHECK(std::abs(w1.integral()) <= 1e-10);

    CHECK(k0.max_imag() <= 1e-12);
    CHECK(k2.max_imag() <= 1e-12);
    for (double t : {0.07, 0.5, 1.31, 2.9})
        CHECK(k2.eval(t) == doctest::Approx(k2.eval(-t)).epsilon(1e-12));

    // scaling: the (n+1)-kernel is 2x the n-kernel evaluated at 2t
    for (int n : {2, 7}) {
        const FilterKernel& ka = FilterKernel::get(n, FilterKind::standard);
        const FilterKernel& kb = FilterKernel::get(n + 1, FilterKind::standard);
        double worst = 0.0;
        for (double t = -1.0; t <= 1.0; t += 1.0 / 512.0)
            worst = std::max(worst, std::abs(kb.eval(t) - 2.0 * ka.eval(2.0 * t)));
        CHECK(worst <= 1e-8 * kb.peak());
    }

    // table values against direct cosine quadrature
    for (double t : {0.0, 0.3, 1.7}) {
        const double direct = simpson_adaptive(
            [t](double xi) { return psi(2, xi) * std::cos(t * xi) / kPi; }, 0.0, 8.0, 1e-13, 1024);
        CHECK(k2.eval(t) == doctest::Approx(direct).epsilon(1e-7));
    }

    CHECK_THROWS_AS(FilterKernel::build(-1, FilterKind::standard), std::invalid_argument);
}

TEST_CASE("decay majorant") {
    CHECK(decay_majorant(0.5) == 1.0);
    CHECK(decay_majorant(2.0) == 0.25);
    CHECK(decay_majorant_scaled(2, 1.0) == doctest::Approx(0.25));  // 4 * b(4) = 4/16
    CHECK_THROWS_AS(decay_majorant_scaled(0, 1.0), std::invalid_argument);

    // L^1 norm is independent of the scale
    const double base = decay_majorant_l1(1);
    for (int m = 2; m <= 8; ++m) CHECK(std::abs(decay_majorant_l1(m) - base) <= 1e-8);
    CHECK(base == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("non-hooked pair bookkeeping") {
    CHECK(pair_not_hooked(7, 1, 2.0));   // 128 > 2 * 64 ... strict
    CHECK_FALSE(pair_not_hooked(6, 1, 2.0));
    const auto pairs = default_pair_budget(2.0, 10);
    CHECK(pairs.size() == 10);
    for (const auto& [n, l] : pairs) {
        CHECK(n >= l + 6);
        CHECK(l >= 1);
        CHECK(n <= 10);
    }

    const LocalBranch t = LocalBranch::affine(2.0, 0.0);
    const LocalWeight g = LocalWeight::bump(0.0, 0.4);
    CHECK_THROWS_AS(kernel_value(t, g, 5, 1, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("kernel values against the product-grid oracle") {
    const LocalBranch t = LocalBranch::affine(2.0, 0.0);
    const LocalWeight g = LocalWeight::bump(0.0, 0.4);

    struct Spot {
        int n, l;
        double x, y;
    };
    for (const Spot s : {Spot{7, 1, 0.1, 0.2}, Spot{7, 1, 0.33, -0.4}, Spot{8, 2, 0.05, 0.6}}) {
        const double v = kernel_value(t, g, s.n, s.l, s.x, s.y);
        const auto o = testsupport::kernel_oracle(t, g, s.n, s.l, s.x, s.y);
        CHECK(std::abs(o.value.imag()) <= 1e-9 * std::max(1.0, std::abs(o.value)));
        CHECK(std::abs(v - o.value) <= 1e-4 * std::abs(o.value));
    }

    const LocalBranch tn = LocalBranch::nonlinear(2.5, 0.4);
    const double v = kernel_value(tn, g, 8, 1, 0.2, 0.1);
    const auto o = testsupport::kernel_oracle(tn, g, 8, 1, 0.2, 0.1);
    CHECK(std::abs(v - o.value) <= 1e-4 * std::abs(o.value));

    // x so far out that the filter kernel window cannot reach the support
    CHECK(kernel_value(t, g, 7, 1, 600.0, 0.0) == 0.0);
}

TEST_CASE("kernel reflection symmetry for even weight and odd branch") {
    const LocalBranch t = LocalBranch::affine(2.0, 0.0);  // odd
    const LocalWeight g = LocalWeight::bump(0.0, 0.4);    // even
    for (double x : {0.15, 0.4})
        for (double y : {-0.3, 0.22}) {
            const double a = kernel_value(t, g, 7, 1, x, y);
            const double b = kernel_value(t, g, 7, 1, -x, -y);
            CHECK(a == doctest::Approx(b).epsilon(1e-6));
        }
}

TEST_CASE("decay table and fitted constants") {
    const LocalBranch t = LocalBranch::affine(2.0, 0.0);
    const LocalWeight g = LocalWeight::bump(0.0, 0.4, 2.0);
    const auto [xs, ys] = default_kernel_grids(g, 17);

    std::vector<KernelGrid> grids;
    for (const auto& [n, l] :
         std::vector<std::pair<int, int>>{{7, 1}, {8, 1}, {8, 2}, {9, 2}})
        grids.push_back(kernel_grid(t, g, n, l, xs, ys));

    const DecayTable table = decay_table(grids, DecayRegime::max_rate, 2.0);
    REQUIRE(table.rows.size() == 4);
    for (const auto& row : table.rows) {
        CHECK(row.c_fit >= 0.0);
        CHECK(std::isfinite(row.c_fit));
    }
    CHECK(table.log2_slope <= 0.1);

    const DecayTable shifted = decay_table(grids, DecayRegime::min_shifted_rate, 2.0);
    CHECK(shifted.log2_slope <= 0.1);
    // the shifted regime's prefactor is weaker by exactly 2^{min(n,l)}
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double ratio = table.rows[i].c_fit / shifted.rows[i].c_fit;
        const double expect = std::pow(2.0, std::min(table.rows[i].n, table.rows[i].ell));
        CHECK(ratio == doctest::Approx(expect).epsilon(1e-9));
    }

    CHECK_THROWS_AS(kernel_grid(t, g, 5, 1, xs, ys), std::invalid_argument);  // hooked
}

TEST_CASE("kernel decay in l at fixed n matches the shifted prefactor") {
    // For fixed n the shifted-regime constants stay bounded as l grows, i.e.
    // the kernel decays at least as fast as 2^{l - r n} predicts.
    const LocalBranch t = LocalBranch::affine(2.0, 0.0);
    const LocalWeight g = LocalWeight::bump(0.0, 0.4, 2.0);
    const auto [xs, ys] = default_kernel_grids(g, 15);
    std::vector<KernelGrid> grids;
    for (int l : {1, 2, 3, 4}) grids.push_back(kernel_grid(t, g, 10, l, xs, ys));
    const DecayTable tb = decay_table(grids, DecayRegime::min_shifted_rate, 2.0);
    for (std::size_t i = 1; i < tb.rows.size(); ++i)
        CHECK(tb.rows[i].c_fit <= tb.rows[0].c_fit * 1.1);
}

TEST_CASE("young convolution bound") {
    const LocalBranch t = LocalBranch::affine(2.0, 0.0);
    const LocalWeight g = LocalWeight::bump(0.0, 0.4, 2.0);
    const auto [xs, ys] = default_kernel_grids(g, 17);
    const KernelGrid grid = kernel_grid(t, g, 7, 1, xs, ys);
    const double c_fit = decay_table({grid}, DecayRegime::max_rate, 2.0).rows[0].c_fit;

    const LocalWeight phi_shape = LocalWeight::bump(0.0, 0.3);
    std::vector<double> phi(ys.size());
    for (std::size_t j = 0; j < ys.size(); ++j) phi[j] = phi_shape.eval(ys[j]);

    for (double p : {1.0, kInf}) {
        const YoungCheck yc = young_bound_check(grid, phi, p, c_fit, DecayRegime::max_rate, 2.0);
        CHECK(yc.measured <= yc.bound);
        CHECK(yc.bound > 0.0);
    }

    const YoungCheck zero = young_bound_check(grid, std::vector<double>(ys.size(), 0.0), kInf,
                                              c_fit, DecayRegime::max_rate, 2.0);
    CHECK(zero.measured == 0.0);
    CHECK(zero.bound == 0.0);

    CHECK_THROWS_AS(young_bound_check(grid, std::vector<double>(3, 1.0), kInf, c_fit,
                                      DecayRegime::max_rate, 2.0),
                    std::invalid_argument);
}
