// Flat, typed key/value experiment configuration with section headers.
// Unknown sections or keys are errors; every command validates before work.
#ifndef CSPEC_CONFIG_HPP
#define CSPEC_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cspec/dyadic.hpp"
#include "cspec/dynamics.hpp"
#include "cspec/kernels.hpp"

namespace cspec {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    // [map]
    std::string map_family = "linear";  // linear | perturbed
    int degree = 2;
    double eps = 0.1;

    // [weight]
    std::string weight_family = "inverse_jacobian";  // constant | inverse_jacobian | trig
    double weight_re = 0.5;
    double weight_im = 0.0;
    double trig_a = 0.2;
    double regularity = 2.0;

    // [space]
    double s = 1.0;
    double p = kInf;
    double q = kInf;
    double sigma = 0.0;  // 0 = resolve by default_sigma
    std::vector<double> s_list = {0.5, 1.0, 2.0};

    // [grid]
    std::size_t grid_n = 512;

    // [filters]
    int filter_n_max = 12;
    long filter_max_freq = 1024;

    // [spectrum]
    std::vector<int> truncations = {8, 16, 32};
    double match_tol = 1e-6;
    bool export_matrix = false;

    // [corpus]
    int corpus_size = 50;
    long corpus_max_freq = 64;
    bool corpus_exponentials = false;
    int ly_iterate = 1;

    // [orbits]
    int orbit_n_max = 12;
    std::string pressure_potential = "zero";  // zero | log_weight

    // [kernel]
    std::string branch_family = "affine";  // affine | nonlinear
    double branch_a = 2.0;
    double branch_b = 0.0;
    double branch_beta = 0.5;
    std::string local_weight_family = "bump";  // bump | cospower
    double local_weight_center = 0.0;
    double local_weight_radius = 0.5;
    int local_weight_power = 4;
    double local_weight_regularity = 2.0;
    int kernel_max_block = 9;
    std::size_t kernel_grid_points = 21;

    // [output]
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    bool quiet = false;

    CircleMap make_map() const;
    Weight make_weight() const;
    LocalBranch make_branch() const;
    LocalWeight make_local_weight() const;
    /// Exponents with sigma resolved; validated against the weight regularity.
    BesovParams make_besov(double s_value) const;
    BesovParams make_besov() const { return make_besov(s); }

    /// Full admissibility check; throws ConfigError.
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace cspec

#endif
