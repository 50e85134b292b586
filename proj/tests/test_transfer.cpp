#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cspec/dyadic.hpp"
#include "cspec/transfer.hpp"

using namespace cspec;

namespace {

GridFunction random_band(std::size_t n, long band, Rng& rng) {
    std::vector<cplx> c(n, cplx(0.0, 0.0));
    for (long k = -band; k <= band; ++k) c[coeff_slot(k, n)] = rng.normal_cplx();
    return GridFunction::from_coefficients(n, c);
}

}  // namespace

TEST_CASE("apply: closed forms on the doubling map") {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp op(dbl, Weight::constant(0.5));

    const GridFunction one = GridFunction::constant(64, 1.0);
    CHECK(rel_l2_error(apply(op, one), one) <= 1e-13);

    // frequency halving: L e_2 = e_1, L e_1 = 0
    CHECK(rel_l2_error(apply(op, GridFunction::exponential(64, 2)),
                       GridFunction::exponential(64, 1)) <= 1e-13);
    CHECK(lp_norm(apply(op, GridFunction::exponential(64, 1)), 2.0) <= 1e-13);

    const GridFunction zero(64);
    CHECK(lp_norm(apply(op, zero), 2.0) == 0.0);

    // inverse-jacobian weight coincides with the constant 1/2
    const TransferOp opj(dbl, Weight::inverse_jacobian(dbl));
    Rng rng(3);
    const GridFunction u = random_band(64, 20, rng);
    CHECK(rel_l2_error(apply(opj, u), apply(op, u)) <= 1e-13);
}

TEST_CASE("apply: linearity and degradation flag") {
    const CircleMap pert = CircleMap::perturbed(2, 0.1);
    const TransferOp op(pert, Weight::trig(0.2));
    Rng rng(11);
    const GridFunction u = random_band(128, 30, rng);
    const GridFunction v = random_band(128, 30, rng);
    const cplx a(0.7, -1.1);

    const GridFunction lhs = apply(op, GridFunction(a * u + v));
    const GridFunction rhs = a * apply(op, u) + apply(op, v);
    CHECK(rel_l2_error(lhs, rhs) <= 1e-12);

    ApplyInfo info;
    apply(op, u, &info);
    CHECK_FALSE(info.degraded);
    apply(op, GridFunction::exponential(128, -64), &info);
    CHECK(info.degraded);
    CHECK(info.top_energy_fraction > 0.99);
}

TEST_CASE("duality residual") {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp op(dbl, Weight::constant(0.5));

    CHECK(duality_residual(op, GridFunction::constant(256, 1.0),
                           GridFunction::constant(256, 1.0)) <= 1e-10);
    CHECK(duality_residual(op, GridFunction::exponential(256, 3),
                           GridFunction::exponential(256, -3)) <= 1e-8);
    CHECK(duality_residual(op, GridFunction::exponential(256, 1),
                           GridFunction::constant(256, 1.0)) <= 1e-8);

    Rng rng(5);
    const CircleMap pert = CircleMap::perturbed(2, 0.1);
    const TransferOp opp(pert, Weight::inverse_jacobian(pert));
    for (int t = 0; t < 10; ++t)
        CHECK(duality_residual(opp, random_band(256, 32, rng), random_band(256, 32, rng)) <= 1e-8);
}

TEST_CASE("mean preservation for the normalized weight") {
    const CircleMap pert = CircleMap::perturbed(2, 0.1);
    const TransferOp op(pert, Weight::inverse_jacobian(pert));
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        const GridFunction u = random_band(256, 40, rng);
        const cplx before = u.coefficients()[0];
        const cplx after = apply(op, u).coefficients()[0];
        CHECK(std::abs(after - before) <= 1e-10 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("Fourier matrix: assembly, restriction, nilpotent structure") {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp op(dbl, Weight::constant(0.5));
    const FourierMatrix m = fourier_matrix(op, 4, 64);
    CHECK_FALSE(m.aliased());

    for (int r = -4; r <= 4; ++r)
        for (int c = -4; c <= 4; ++c) {
            const double expect = (c == 2 * r) ? 1.0 : 0.0;
            CHECK(std::abs(m.entry(r, c) - expect) <= 1e-10);
        }

    // restriction is an exact sub-block
    const FourierMatrix big = fourier_matrix(op, 8, 128);
    const FourierMatrix small = fourier_matrix(op, 4, 128);
    const FourierMatrix cut = big.restricted(4);
    for (int r = -4; r <= 4; ++r)
        for (int c = -4; c <= 4; ++c) CHECK(cut.entry(r, c) == small.entry(r, c));

    CHECK(fourier_matrix(op, 4, 16).aliased());

    // weight identity: 1/|f'| gives the same matrix as the constant 1/2
    const FourierMatrix mj = fourier_matrix(TransferOp(dbl, Weight::inverse_jacobian(dbl)), 4, 64);
    for (int r = -4; r <= 4; ++r)
        for (int c = -4; c <= 4; ++c) CHECK(std::abs(mj.entry(r, c) - m.entry(r, c)) <= 1e-12);
}

TEST_CASE("matrix columns reproduce the applied exponentials") {
    // Inverse-transforming column j recovers L e_j on the assembly grid.
    const CircleMap pert = CircleMap::perturbed(2, 0.1);
    const TransferOp op(pert, Weight::trig(0.2));
    const int k = 16;
    const std::size_t grid = 256;
    const FourierMatrix m = fourier_matrix(op, k, grid);
    for (int j : {-9, 0, 3, 14}) {
        std::vector<cplx> c(grid, cplx(0.0, 0.0));
        for (int r = -k; r <= k; ++r) c[coeff_slot(r, grid)] = m.entry(r, j);
        const GridFunction from_column = GridFunction::from_coefficients(grid, c);
        const GridFunction direct = apply(op, GridFunction::exponential(grid, j));
        double worst = 0.0;
        for (std::size_t i = 0; i < grid; ++i)
            worst = std::max(worst,
                             std::abs(from_column.samples()[i] - direct.samples()[i]));
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("eigenvalues of the doubling truncation") {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp op(dbl, Weight::constant(0.5));
    const FourierMatrix m = fourier_matrix(op, 4, 64);
    const auto ev = eigenvalues(m);
    CHECK(std::abs(ev[0] - cplx(1.0, 0.0)) <= 1e-10);
    // the rest is the dense-solver realization of an exact zero cluster
    for (std::size_t i = 1; i < ev.size(); ++i) CHECK(std::abs(ev[i]) <= 1e-4);

    // algebraic oracle: M^t [r][c] = [c = 2^t r], so M^{t+1} = M^t for t >= 3
    // at K = 4 and the spectrum is exactly {1, 0}.
    auto mat_mul = [&](const FourierMatrix& a, const FourierMatrix& b) {
        FourierMatrix out(4, 64);
        for (int r = -4; r <= 4; ++r)
            for (int c = -4; c <= 4; ++c) {
                cplx acc(0.0, 0.0);
                for (int k = -4; k <= 4; ++k) acc += a.entry(r, k) * b.entry(k, c);
                out.set_entry(r, c, acc);
            }
        return out;
    };
    FourierMatrix p3 = mat_mul(mat_mul(m, m), m);
    FourierMatrix p4 = mat_mul(p3, m);
    for (int r = -4; r <= 4; ++r)
        for (int c = -4; c <= 4; ++c)
            CHECK(std::abs(p4.entry(r, c) - p3.entry(r, c)) <= 1e-10);

    // leading eigenvalue 2c for a constant weight c
    const FourierMatrix mc = fourier_matrix(TransferOp(dbl, Weight::constant(0.3)), 4, 64);
    CHECK(std::abs(eigenvalues(mc)[0] - cplx(0.6, 0.0)) <= 1e-10);

    // zero weight: zero matrix, all eigenvalues zero
    const FourierMatrix mz = fourier_matrix(TransferOp(dbl, Weight::constant(0.0)), 4, 64);
    for (const cplx& z : eigenvalues(mz)) CHECK(std::abs(z) <= 1e-14);
}

TEST_CASE("stable eigenvalues across truncations") {
    const CircleMap dbl = CircleMap::doubling();
    const TransferOp opj(dbl, Weight::inverse_jacobian(dbl));
    const StableSpectrum ss = stable_eigenvalues(opj, {8, 16, 32}, 1e-6);
    REQUIRE(ss.stable.size() == 1);
    CHECK(std::abs(ss.stable[0].value - cplx(1.0, 0.0)) <= 1e-10);
    for (double d : ss.stable[0].drifts) CHECK(d <= 1e-10);

    const StableSpectrum sc =
        stable_eigenvalues(TransferOp(dbl, Weight::constant(0.3)), {8, 16, 32}, 1e-6);
    REQUIRE(sc.stable.size() == 1);
    CHECK(std::abs(sc.stable[0].value - cplx(0.6, 0.0)) <= 1e-10);

    // acim eigenvalue 1 for the perturbed normalized operator
    const CircleMap pert = CircleMap::perturbed(2, 0.1);
    const StableSpectrum sp =
        stable_eigenvalues(TransferOp(pert, Weight::inverse_jacobian(pert)), {8, 16, 32}, 1e-6);
    REQUIRE(!sp.stable.empty());
    CHECK(std::abs(sp.stable[0].value - cplx(1.0, 0.0)) <= 1e-8);
    CHECK(sp.stable[0].drifts.back() <= 1e-8);

    CHECK_THROWS_AS(stable_eigenvalues(opj, {8, 16}, 1e-6), std::invalid_argument);
}

TEST_CASE("matrix CSV export") {
    const CircleMap dbl = CircleMap::doubling();
    const FourierMatrix m = fourier_matrix(TransferOp(dbl, Weight::constant(0.5)), 1, 16);
    std::ostringstream os;
    write_matrix_csv(m, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "m,j,re,im");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 9);  // (2K+1)^2 with K = 1
}
