#include "cspec/transfer.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cspec/util.hpp"

namespace cspec {

TransferOp::TransferOp(CircleMap m, Weight w) : map(std::move(m)), weight(std::move(w)) {
    if (!(weight.regularity() >= 1.0))
        throw std::invalid_argument("TransferOp: weight regularity must be >= 1");
}

namespace {

double top_octave_energy_fraction(const GridFunction& u) {
    const std::vector<cplx> c = u.coefficients();
    const long half = static_cast<long>(u.size()) / 2;
    double total = 0.0, top = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double e = std::norm(c[j]);
        total += e;
        if (std::labs(slot_freq(j, u.size())) > half / 2) top += e;
    }
    return total > 0.0 ? top / total : 0.0;
}

}  // namespace

GridFunction apply_on_grid(const TransferOp& op, const GridFunction& u, std::size_t out_n,
                           ApplyInfo* info) {
    if (out_n < u.size())
        throw std::invalid_argument("apply_on_grid: output grid must not be coarser than the input");
    if (info) {
        info->top_energy_fraction = top_octave_energy_fraction(u);
        info->degraded = info->top_energy_fraction > 1e-8;
    }
    const std::vector<cplx> coeffs = u.coefficients();
    GridFunction out(out_n);
    const int k = op.map.degree();
    for (std::size_t j = 0; j < out_n; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(out_n);
        cplx acc(0.0, 0.0);
        for (int i = 0; i < k; ++i) {
            const double y = op.map.inverse_branch(i, x);
            acc += op.weight.eval(y) * eval_coefficients(coeffs, y);
        }
        out.samples()[j] = acc;
    }
    return out;
}

GridFunction apply(const TransferOp& op, const GridFunction& u, ApplyInfo* info) {
    return apply_on_grid(op, u, u.size(), info);
}

GridFunction apply_power(const TransferOp& op, GridFunction u, int n) {
    for (int j = 0; j < n; ++j) u = apply(op, u);
    return u;
}

double duality_residual(const TransferOp& op, const GridFunction& u, const GridFunction& phi) {
    if (u.size() != phi.size()) throw std::invalid_argument("duality_residual: grid mismatch");
    const std::size_t n = u.size();
    const GridFunction lu = apply(op, u);
    cplx lhs(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) lhs += lu.samples()[j] * phi.samples()[j];
    lhs /= static_cast<double>(n);

    const std::vector<cplx> phi_coeffs = phi.coefficients();
    cplx rhs(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(n);
        const cplx phi_fx = eval_coefficients(phi_coeffs, op.map.eval(x));
        rhs += u.samples()[j] * phi_fx * op.weight.eval(x) * std::abs(op.map.deriv(x));
    }
    rhs /= static_cast<double>(n);
    return std::abs(lhs - rhs);
}

FourierMatrix::FourierMatrix(int truncation, std::size_t grid_n)
    : k_(truncation), grid_n_(grid_n), aliased_(grid_n < 8 * static_cast<std::size_t>(truncation)) {
    if (truncation < 1) throw std::invalid_argument("FourierMatrix: truncation must be >= 1");
    data_.assign(static_cast<std::size_t>(dim()) * dim(), cplx(0.0, 0.0));
}

std::size_t FourierMatrix::slot(int m, int j) const {
    if (std::abs(m) > k_ || std::abs(j) > k_)
        throw std::out_of_range("FourierMatrix: index outside truncation");
    return static_cast<std::size_t>(m + k_) * dim() + static_cast<std::size_t>(j + k_);
}

FourierMatrix FourierMatrix::restricted(int smaller_k) const {
    if (smaller_k > k_) throw std::invalid_argument("FourierMatrix::restricted: K' > K");
    FourierMatrix out(smaller_k, grid_n_);
    for (int m = -smaller_k; m <= smaller_k; ++m)
        for (int j = -smaller_k; j <= smaller_k; ++j) out.set_entry(m, j, entry(m, j));
    return out;
}

FourierMatrix fourier_matrix(const TransferOp& op, int truncation, std::size_t grid_n) {
    FourierMatrix mat(truncation, grid_n);
    for (int j = -truncation; j <= truncation; ++j) {
        const GridFunction lej = apply(op, GridFunction::exponential(grid_n, j));
        const std::vector<cplx> c = lej.coefficients();
        for (int m = -truncation; m <= truncation; ++m)
            mat.set_entry(m, j, c[coeff_slot(m, grid_n)]);
    }
    return mat;
}

std::vector<cplx> eigenvalues(const FourierMatrix& m) {
    const int d = m.dim();
    Eigen::MatrixXcd a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            a(r, c) = m.entry(r - m.truncation(), c - m.truncation());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues: dense eigensolver failed");
    std::vector<cplx> out(d);
    for (int i = 0; i < d; ++i) out[i] = solver.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](cplx a_, cplx b_) { return std::abs(a_) > std::abs(b_); });
    return out;
}

StableSpectrum stable_eigenvalues(const TransferOp& op, const std::vector<int>& truncations,
                                  double match_tol, double min_modulus) {
    if (truncations.size() < 3)
        throw std::invalid_argument("stable_eigenvalues: need at least 3 truncation levels");
    std::vector<int> ks = truncations;
    std::sort(ks.begin(), ks.end());

    // One shared assembly grid, so coarser truncations are exact sub-blocks.
    const std::size_t grid_n = [&] {
        std::size_t n = 8;
        while (n < 8 * static_cast<std::size_t>(ks.back())) n *= 2;
        return n;
    }();
    const FourierMatrix full = fourier_matrix(op, ks.back(), grid_n);

    StableSpectrum out;
    out.truncations = ks;
    for (int k : ks) out.spectra.push_back(eigenvalues(full.restricted(k)));
    const std::vector<std::vector<cplx>>& spectra = out.spectra;
    const std::vector<cplx>& finest = spectra.back();
    std::vector<bool> used(finest.size(), false);
    for (std::size_t ci = 0; ci < finest.size(); ++ci) {
        const cplx z = finest[ci];
        if (std::abs(z) < min_modulus) continue;
        if (used[ci]) continue;
        // Collapse near-identical candidates at the finest level.
        for (std::size_t cj = ci + 1; cj < finest.size(); ++cj)
            if (std::abs(finest[cj] - z) < match_tol) used[cj] = true;

        StableEigenvalue cand;
        cand.value = z;
        bool present_everywhere = true;
        for (const auto& spec : spectra) {
            double best = kInf;
            cplx best_val(0.0, 0.0);
            for (const cplx& w : spec) {
                const double d = std::abs(w - z);
                if (d < best) {
                    best = d;
                    best_val = w;
                }
            }
            if (best > match_tol) {
                present_everywhere = false;
                break;
            }
            cand.per_level.push_back(best_val);
        }
        if (!present_everywhere) {
            out.rejected.push_back(z);
            continue;
        }
        for (std::size_t i = 0; i + 1 < cand.per_level.size(); ++i)
            cand.drifts.push_back(std::abs(cand.per_level[i + 1] - cand.per_level[i]));
        cand.drift_nonincreasing = true;
        for (std::size_t i = 0; i + 1 < cand.drifts.size(); ++i)
            if (cand.drifts[i + 1] > cand.drifts[i] + 1e-12) cand.drift_nonincreasing = false;
        const double d_last = cand.drifts.empty() ? 0.0 : cand.drifts.back();
        // A resolved eigenvalue settles: tiny final drift relative to its own
        // modulus. Dense-solver scatter around defective clusters moves by
        // its own order of magnitude between truncations and fails this.
        const bool drift_ok = cand.drift_nonincreasing || d_last <= 1e-9;
        const bool settled = d_last <= 0.05 * std::abs(z) + 1e-12;
        if (!drift_ok || !settled) {
            out.rejected.push_back(z);
            continue;
        }
        out.stable.push_back(std::move(cand));
    }
    std::sort(out.stable.begin(), out.stable.end(),
              [](const StableEigenvalue& a, const StableEigenvalue& b) {
                  return std::abs(a.value) > std::abs(b.value);
              });
    return out;
}

void write_matrix_csv(const FourierMatrix& m, std::ostream& os) {
    os << "m,j,re,im\n";
    for (int r = -m.truncation(); r <= m.truncation(); ++r)
        for (int c = -m.truncation(); c <= m.truncation(); ++c) {
            const cplx v = m.entry(r, c);
            os << r << "," << c << "," << format_full(v.real()) << "," << format_full(v.imag())
               << "\n";
        }
}

}  // namespace cspec
