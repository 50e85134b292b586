#include "cspec/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cspec/io.hpp"
#include "cspec/lasota_yorke.hpp"

namespace cspec {

namespace {

using ojson = nlohmann::ordered_json;

std::string path_join(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void note(std::ostream& log, const ExperimentConfig& cfg, const std::string& path) {
    if (!cfg.quiet) log << "wrote " << path << "\n";
}

std::vector<GridFunction> build_corpus(const ExperimentConfig& cfg) {
    Rng rng(cfg.seed);
    std::vector<GridFunction> corpus =
        random_band_limited_corpus(cfg.grid_n, cfg.corpus_max_freq, cfg.corpus_size, rng);
    if (cfg.corpus_exponentials)
        for (long k = 0; k <= cfg.corpus_max_freq; ++k)
            corpus.push_back(GridFunction::exponential(cfg.grid_n, k));
    return corpus;
}

ojson constants_json(const LYConstants& c) {
    ojson j;
    j["lambda"] = c.lambda;
    j["alpha"] = c.alpha;
    j["c1"] = c.c1;
    j["gamma_tilde"] = c.gamma_tilde;
    j["chart_multiplier_norm"] = c.chart_multiplier_norm;
    j["gamma"] = c.gamma;
    j["s"] = c.s;
    j["p"] = c.p == kInf ? ojson("inf") : ojson(c.p);
    j["q"] = c.q == kInf ? ojson("inf") : ojson(c.q);
    j["sigma"] = c.sigma;
    j["iterate"] = c.iterate;
    return j;
}

// Fixed column order for regression diffing.
void write_constants_csv(const LYConstants& c, const std::string& path) {
    auto f = open_out(path);
    write_csv_row(f, {"lambda", "alpha", "c1", "gamma_tilde", "chart_multiplier_norm", "gamma",
                      "s", "p", "q", "sigma", "iterate"});
    write_csv_row(f, {format_full(c.lambda), format_full(c.alpha), format_full(c.c1),
                      format_full(c.gamma_tilde), format_full(c.chart_multiplier_norm),
                      format_full(c.gamma), format_full(c.s), format_full(c.p), format_full(c.q),
                      format_full(c.sigma), std::to_string(c.iterate)});
}

}  // namespace

int cmd_filters(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_dir(cfg.out_dir);
    const int n_max = cfg.filter_n_max;
    const long max_freq = cfg.filter_max_freq;

    std::vector<DyadicFilter> standard, wide;
    for (int n = 0; n <= n_max; ++n) {
        standard.push_back(DyadicFilter::build(n, FilterKind::standard, max_freq));
        wide.push_back(DyadicFilter::build(n, FilterKind::wide, max_freq));
    }

    // Partition-of-unity residuals over the covered range.
    const long cover = std::min(max_freq, 1L << std::min(n_max, 30));
    double max_residual = 0.0;
    {
        auto f = open_out(path_join(cfg.out_dir, "partition.csv"));
        write_csv_row(f, {"k", "sum", "residual"});
        for (long k = 0; k <= cover; ++k) {
            double sum = 0.0;
            for (const auto& filt : standard) sum += filt.value(k);
            const double res = std::abs(sum - 1.0);
            max_residual = std::max(max_residual, res);
            write_csv_row(f, {std::to_string(k), format_full(sum), format_full(res)});
        }
        note(log, cfg, "partition.csv");
    }

    {
        auto f = open_out(path_join(cfg.out_dir, "filters.csv"));
        write_csv_row(f, {"n", "standard_peak", "standard_first_nonzero", "standard_last_nonzero",
                          "standard_truncated", "wide_peak", "wide_truncated",
                          "max_partition_residual"});
        for (int n = 0; n <= n_max; ++n) {
            long first = -1, last = -1;
            double peak = 0.0;
            for (long k = 0; k <= max_freq; ++k) {
                const double v = standard[n].value(k);
                if (v != 0.0) {
                    if (first < 0) first = k;
                    last = k;
                    peak = std::max(peak, v);
                }
            }
            double wide_peak = 0.0;
            for (long k = 0; k <= max_freq; ++k) wide_peak = std::max(wide_peak, wide[n].value(k));
            write_csv_row(f, {std::to_string(n), format_full(peak), std::to_string(first),
                              std::to_string(last), standard[n].truncated() ? "1" : "0",
                              format_full(wide_peak), wide[n].truncated() ? "1" : "0",
                              format_full(max_residual)});
        }
        note(log, cfg, "filters.csv");
    }

    {
        auto f = open_out(path_join(cfg.out_dir, "psi_table.csv"));
        write_csv_row(f, {"n", "kind", "k", "value"});
        for (int n = 0; n <= n_max; ++n)
            for (long k = 0; k <= max_freq; ++k) {
                write_csv_row(f, {std::to_string(n), "standard", std::to_string(k),
                                  format_full(standard[n].value(k))});
                write_csv_row(f, {std::to_string(n), "wide", std::to_string(k),
                                  format_full(wide[n].value(k))});
            }
        note(log, cfg, "psi_table.csv");
    }
    return 0;
}

int cmd_bounds(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_dir(cfg.out_dir);
    const CircleMap map = cfg.make_map();
    const Weight weight = cfg.make_weight();

    auto f = open_out(path_join(cfg.out_dir, "bounds.csv"));
    write_csv_row(f, {"s", "chi_min", "growth", "thm_bound", "gl_bound", "rel_diff", "coincide"});
    EssentialBound last_bound;
    for (double s : cfg.s_list) {
        const EssentialBound b = essential_radius_bound(map, weight, s, cfg.orbit_n_max);
        const double gl = gundlach_latushkin_bound(map, weight, s, cfg.orbit_n_max);
        const double rel = std::abs(b.bound - gl) / b.bound;
        write_csv_row(f, {format_full(s), format_full(b.chi_min), format_full(b.growth),
                          format_full(b.bound), format_full(gl), format_full(rel),
                          rel <= 1e-6 ? "1" : "0"});
        last_bound = b;
    }
    note(log, cfg, "bounds.csv");

    {
        auto g = open_out(path_join(cfg.out_dir, "chi_seq.csv"));
        write_csv_row(g, {"n", "chi_n"});
        for (std::size_t i = 0; i < last_bound.chi_seq.values.size(); ++i)
            write_csv_row(g, {std::to_string(i + 1), format_full(last_bound.chi_seq.values[i])});
        note(log, cfg, "chi_seq.csv");
    }
    {
        auto g = open_out(path_join(cfg.out_dir, "growth_seq.csv"));
        write_csv_row(g, {"n", "r_root"});
        for (std::size_t i = 0; i < last_bound.growth_seq.roots.size(); ++i)
            write_csv_row(g, {std::to_string(i + 1), format_full(last_bound.growth_seq.roots[i])});
        note(log, cfg, "growth_seq.csv");
    }
    return 0;
}

int cmd_spectrum(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_dir(cfg.out_dir);
    const TransferOp op(cfg.make_map(), cfg.make_weight());
    const StableSpectrum ss = stable_eigenvalues(op, cfg.truncations, cfg.match_tol);

    {
        auto f = open_out(path_join(cfg.out_dir, "eigenvalues.csv"));
        write_csv_row(f, {"truncation", "index", "re", "im", "abs"});
        for (std::size_t lvl = 0; lvl < ss.truncations.size(); ++lvl)
            for (std::size_t i = 0; i < ss.spectra[lvl].size(); ++i) {
                const cplx z = ss.spectra[lvl][i];
                write_csv_row(f, {std::to_string(ss.truncations[lvl]), std::to_string(i),
                                  format_full(z.real()), format_full(z.imag()),
                                  format_full(std::abs(z))});
            }
        note(log, cfg, "eigenvalues.csv");
    }
    {
        auto f = open_out(path_join(cfg.out_dir, "stable.csv"));
        write_csv_row(f, {"re", "im", "abs", "final_drift", "drift_nonincreasing"});
        for (const auto& se : ss.stable)
            write_csv_row(f, {format_full(se.value.real()), format_full(se.value.imag()),
                              format_full(std::abs(se.value)),
                              format_full(se.drifts.empty() ? 0.0 : se.drifts.back()),
                              se.drift_nonincreasing ? "1" : "0"});
        note(log, cfg, "stable.csv");
    }
    {
        ojson j;
        j["truncations"] = ss.truncations;
        j["stable"] = ojson::array();
        for (const auto& se : ss.stable) {
            ojson e;
            e["re"] = se.value.real();
            e["im"] = se.value.imag();
            e["abs"] = std::abs(se.value);
            e["drifts"] = se.drifts;
            e["drift_nonincreasing"] = se.drift_nonincreasing;
            j["stable"].push_back(e);
        }
        j["rejected_count"] = ss.rejected.size();
        auto f = open_out(path_join(cfg.out_dir, "spectrum.json"));
        f << j.dump(2) << "\n";
        note(log, cfg, "spectrum.json");
    }
    if (cfg.export_matrix) {
        std::size_t grid = 8;
        const int kmax = *std::max_element(cfg.truncations.begin(), cfg.truncations.end());
        while (grid < 8 * static_cast<std::size_t>(kmax)) grid *= 2;
        const FourierMatrix m = fourier_matrix(op, kmax, grid);
        auto f = open_out(path_join(cfg.out_dir, "matrix.csv"));
        write_matrix_csv(m, f);
        note(log, cfg, "matrix.csv");
    }
    return 0;
}

int cmd_ly_verify(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_dir(cfg.out_dir);
    const TransferOp op(cfg.make_map(), cfg.make_weight());
    const BesovParams params = cfg.make_besov();
    const std::vector<GridFunction> corpus = build_corpus(cfg);
    const LYReport report = verify_lasota_yorke(op, params, corpus, cfg.ly_iterate, cfg.seed + 1);

    write_constants_csv(report.constants, path_join(cfg.out_dir, "constants.csv"));
    note(log, cfg, "constants.csv");

    {
        auto f = open_out(path_join(cfg.out_dir, "ly_records.csv"));
        write_csv_row(f, {"index", "besov_strong", "besov_weak", "low_weighted", "high_weighted",
                          "low_bound", "high_ratio", "pass"});
        for (std::size_t i = 0; i < report.records.size(); ++i) {
            const LYRecord& r = report.records[i];
            write_csv_row(f, {std::to_string(i), format_full(r.besov_strong),
                              format_full(r.besov_weak), format_full(r.low_weighted),
                              format_full(r.high_weighted), format_full(r.low_bound),
                              format_full(r.high_ratio), r.pass ? "1" : "0"});
        }
        note(log, cfg, "ly_records.csv");
    }
    {
        ojson j;
        j["constants"] = constants_json(report.constants);
        j["corpus_size"] = report.records.size();
        j["fitted_high_constant"] = report.fitted_high_constant;
        j["max_consistency"] = report.max_consistency;
        j["resolution_flag"] = report.resolution_flag;
        j["pass"] = report.pass;
        auto f = open_out(path_join(cfg.out_dir, "ly_report.json"));
        f << j.dump(2) << "\n";
        note(log, cfg, "ly_report.json");
    }
    return 0;
}

int cmd_kernel_decay(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_dir(cfg.out_dir);
    const LocalBranch branch = cfg.make_branch();
    const LocalWeight weight = cfg.make_local_weight();
    const double stretch = branch_stretch(branch, weight);
    const auto pairs = default_pair_budget(stretch, cfg.kernel_max_block);
    if (pairs.empty())
        throw ConfigError("kernel: no non-hooked pairs within the block budget for this stretch");

    const auto [xs, ys] = default_kernel_grids(weight, cfg.kernel_grid_points);
    std::vector<KernelGrid> grids;
    for (const auto& [n, ell] : pairs) grids.push_back(kernel_grid(branch, weight, n, ell, xs, ys));

    const double r = weight.regularity();
    const DecayTable table_a = decay_table(grids, DecayRegime::max_rate, r);
    const DecayTable table_b = decay_table(grids, DecayRegime::min_shifted_rate, r);

    {
        auto f = open_out(path_join(cfg.out_dir, "decay.csv"));
        write_csv_row(f, {"regime", "n", "ell", "max_nl", "c_fit"});
        for (const auto* t : {&table_a, &table_b})
            for (const auto& row : t->rows)
                write_csv_row(f, {t->regime == DecayRegime::max_rate ? "max_rate" : "min_shifted",
                                  std::to_string(row.n), std::to_string(row.ell),
                                  std::to_string(std::max(row.n, row.ell)),
                                  format_full(row.c_fit)});
        note(log, cfg, "decay.csv");
    }
    {
        auto f = open_out(path_join(cfg.out_dir, "majorant_l1.csv"));
        write_csv_row(f, {"m", "l1_norm"});
        for (int m = 1; m <= 8; ++m)
            write_csv_row(f, {std::to_string(m), format_full(decay_majorant_l1(m))});
        note(log, cfg, "majorant_l1.csv");
    }
    {
        auto f = open_out(path_join(cfg.out_dir, "young.csv"));
        write_csv_row(f, {"n", "ell", "p", "measured", "bound"});
        std::vector<double> phi(ys.size());
        const LocalWeight test_bump = LocalWeight::bump(
            0.5 * (weight.support_lo() + weight.support_hi()),
            0.4 * (weight.support_hi() - weight.support_lo()));
        for (std::size_t j = 0; j < ys.size(); ++j) phi[j] = test_bump.eval(ys[j]);
        for (std::size_t gi = 0; gi < std::min<std::size_t>(grids.size(), 4); ++gi) {
            const auto& g = grids[gi];
            const double c_fit = table_a.rows[gi].c_fit;
            for (double p : {1.0, kInf}) {
                const YoungCheck y = young_bound_check(g, phi, p, c_fit, DecayRegime::max_rate, r);
                write_csv_row(f, {std::to_string(g.n), std::to_string(g.ell),
                                  p == kInf ? "inf" : format_full(p), format_full(y.measured),
                                  format_full(y.bound)});
            }
        }
        note(log, cfg, "young.csv");
    }
    {
        auto f = open_out(path_join(cfg.out_dir, "kernel_heat.dat"));
        write_kernel_heat(grids.back(), f);
        note(log, cfg, "kernel_heat.dat");
    }
    {
        ojson j;
        j["stretch"] = stretch;
        j["regularity"] = r;
        j["pairs"] = pairs.size();
        j["slope_max_rate"] = table_a.log2_slope;
        j["slope_min_shifted"] = table_b.log2_slope;
        auto f = open_out(path_join(cfg.out_dir, "decay_summary.json"));
        f << j.dump(2) << "\n";
        note(log, cfg, "decay_summary.json");
    }
    return 0;
}

int cmd_pressure(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_dir(cfg.out_dir);
    const CircleMap map = cfg.make_map();
    std::function<double(double)> phi = [](double) { return 0.0; };
    if (cfg.pressure_potential == "log_weight") {
        const Weight w = cfg.make_weight();
        if (w.min_abs() < 1e-12) throw ConfigError("pressure: log_weight needs a nonvanishing weight");
        phi = [w](double x) { return std::log(std::abs(w.eval(x))); };
    }
    const PressureSequence seq = topological_pressure(map, phi, cfg.orbit_n_max);

    auto f = open_out(path_join(cfg.out_dir, "pressure.csv"));
    write_csv_row(f, {"n", "value", "exp_value", "delta"});
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
        const double delta = i == 0 ? 0.0 : seq.values[i] - seq.values[i - 1];
        write_csv_row(f, {std::to_string(i + 1), format_full(seq.values[i]),
                          format_full(std::exp(seq.values[i])), format_full(delta)});
    }
    note(log, cfg, "pressure.csv");

    ojson j;
    j["potential"] = cfg.pressure_potential;
    j["last"] = seq.last;
    j["accelerated"] = seq.accelerated;
    j["exp_last"] = std::exp(seq.last);
    j["exp_accelerated"] = std::exp(seq.accelerated);
    auto g = open_out(path_join(cfg.out_dir, "pressure.json"));
    g << j.dump(2) << "\n";
    note(log, cfg, "pressure.json");
    return 0;
}

int cmd_report(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_dir(cfg.out_dir);
    const CircleMap map = cfg.make_map();
    const Weight weight = cfg.make_weight();
    const TransferOp op(map, weight);

    ojson j;
    j["map"] = cfg.map_family;
    j["degree"] = cfg.degree;
    j["weight"] = cfg.weight_family;
    j["s"] = cfg.s;

    const EssentialBound bound = essential_radius_bound(map, weight, cfg.s, cfg.orbit_n_max);
    j["chi_min"] = bound.chi_min;
    j["growth"] = bound.growth;
    j["essential_bound"] = bound.bound;
    if (weight.min_abs() > 1e-12)
        j["gl_bound"] = gundlach_latushkin_bound(map, weight, cfg.s, cfg.orbit_n_max);

    const ProbeReport probe =
        essential_radius_probe(op, cfg.s, cfg.truncations, cfg.orbit_n_max, cfg.match_tol);
    ojson pj;
    pj["bound"] = probe.bound;
    pj["margin"] = probe.margin;
    pj["consistent"] = probe.consistent;
    pj["stable"] = ojson::array();
    for (const auto& e : probe.entries) {
        ojson ej;
        ej["re"] = e.value.real();
        ej["im"] = e.value.imag();
        ej["abs"] = e.modulus;
        ej["final_drift"] = e.final_drift;
        ej["above_bound"] = e.above_bound;
        pj["stable"].push_back(ej);
    }
    pj["flagged_count"] = probe.flagged.size();
    j["probe"] = pj;

    if (weight.min_abs() > 1e-12) {
        const PressureSequence seq = topological_pressure(
            map, [&](double x) { return std::log(std::abs(weight.eval(x))); }, cfg.orbit_n_max);
        j["pressure_log_weight_last"] = seq.last;
        j["pressure_log_weight_accelerated"] = seq.accelerated;
        j["exp_pressure"] = std::exp(seq.last);
        if (!probe.entries.empty())
            j["leading_vs_exp_pressure"] =
                std::abs(probe.entries.front().modulus - std::exp(seq.last));
    }

    auto f = open_out(path_join(cfg.out_dir, "report.json"));
    f << j.dump(2) << "\n";
    note(log, cfg, "report.json");
    return 0;
}

}  // namespace cspec
