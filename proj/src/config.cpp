#include "cspec/config.hpp"

#include <fstream>
#include <sstream>

namespace cspec {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "INF" || v == "Inf") return kInf;
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& v, F item) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(item(key, tok));
    }
    if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"map",    "weight", "space",  "grid",  "filters",
                                          "spectrum", "corpus", "orbits", "kernel", "output"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;

        if (full == "map.family") cfg.map_family = val;
        else if (full == "map.degree") cfg.degree = static_cast<int>(parse_long(full, val));
        else if (full == "map.epsilon") cfg.eps = parse_double(full, val);
        else if (full == "weight.family") cfg.weight_family = val;
        else if (full == "weight.value_re") cfg.weight_re = parse_double(full, val);
        else if (full == "weight.value_im") cfg.weight_im = parse_double(full, val);
        else if (full == "weight.a") cfg.trig_a = parse_double(full, val);
        else if (full == "weight.regularity") cfg.regularity = parse_double(full, val);
        else if (full == "space.s") cfg.s = parse_double(full, val);
        else if (full == "space.p") cfg.p = parse_double(full, val);
        else if (full == "space.q") cfg.q = parse_double(full, val);
        else if (full == "space.sigma") cfg.sigma = parse_double(full, val);
        else if (full == "space.s_list") cfg.s_list = parse_list<double>(full, val, parse_double);
        else if (full == "grid.n") cfg.grid_n = static_cast<std::size_t>(parse_long(full, val));
        else if (full == "filters.n_max") cfg.filter_n_max = static_cast<int>(parse_long(full, val));
        else if (full == "filters.max_freq") cfg.filter_max_freq = parse_long(full, val);
        else if (full == "spectrum.truncations")
            cfg.truncations = parse_list<int>(full, val, [](const std::string& k, const std::string& t) {
                return static_cast<int>(parse_long(k, t));
            });
        else if (full == "spectrum.match_tol") cfg.match_tol = parse_double(full, val);
        else if (full == "spectrum.export_matrix") cfg.export_matrix = parse_bool(full, val);
        else if (full == "corpus.size") cfg.corpus_size = static_cast<int>(parse_long(full, val));
        else if (full == "corpus.max_freq") cfg.corpus_max_freq = parse_long(full, val);
        else if (full == "corpus.exponentials") cfg.corpus_exponentials = parse_bool(full, val);
        else if (full == "corpus.iterate") cfg.ly_iterate = static_cast<int>(parse_long(full, val));
        else if (full == "orbits.n_max") cfg.orbit_n_max = static_cast<int>(parse_long(full, val));
        else if (full == "orbits.potential") cfg.pressure_potential = val;
        else if (full == "kernel.branch") cfg.branch_family = val;
        else if (full == "kernel.a") cfg.branch_a = parse_double(full, val);
        else if (full == "kernel.b") cfg.branch_b = parse_double(full, val);
        else if (full == "kernel.beta") cfg.branch_beta = parse_double(full, val);
        else if (full == "kernel.weight") cfg.local_weight_family = val;
        else if (full == "kernel.center") cfg.local_weight_center = parse_double(full, val);
        else if (full == "kernel.radius") cfg.local_weight_radius = parse_double(full, val);
        else if (full == "kernel.power") cfg.local_weight_power = static_cast<int>(parse_long(full, val));
        else if (full == "kernel.regularity") cfg.local_weight_regularity = parse_double(full, val);
        else if (full == "kernel.max_block") cfg.kernel_max_block = static_cast<int>(parse_long(full, val));
        else if (full == "kernel.grid_points")
            cfg.kernel_grid_points = static_cast<std::size_t>(parse_long(full, val));
        else if (full == "output.dir") cfg.out_dir = val;
        else if (full == "output.seed") cfg.seed = static_cast<std::uint64_t>(parse_long(full, val));
        else if (full == "output.quiet") cfg.quiet = parse_bool(full, val);
        else
            throw ConfigError("config: unknown key '" + full + "'");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    ExperimentConfig cfg = parse_config_text(buf.str());
    cfg.validate();
    return cfg;
}

CircleMap ExperimentConfig::make_map() const {
    if (map_family == "linear") return CircleMap::linear(degree);
    if (map_family == "perturbed") return CircleMap::perturbed(degree, eps);
    throw ConfigError("config: unknown map family '" + map_family + "'");
}

Weight ExperimentConfig::make_weight() const {
    if (weight_family == "constant") return Weight::constant(cplx(weight_re, weight_im), regularity);
    if (weight_family == "inverse_jacobian") return Weight::inverse_jacobian(make_map(), regularity);
    if (weight_family == "trig") return Weight::trig(trig_a, regularity);
    throw ConfigError("config: unknown weight family '" + weight_family + "'");
}

LocalBranch ExperimentConfig::make_branch() const {
    if (branch_family == "affine") return LocalBranch::affine(branch_a, branch_b);
    if (branch_family == "nonlinear") return LocalBranch::nonlinear(branch_a, branch_beta);
    throw ConfigError("config: unknown branch family '" + branch_family + "'");
}

LocalWeight ExperimentConfig::make_local_weight() const {
    if (local_weight_family == "bump")
        return LocalWeight::bump(local_weight_center, local_weight_radius, local_weight_regularity);
    if (local_weight_family == "cospower")
        return LocalWeight::cospower(local_weight_center, local_weight_radius, local_weight_power);
    throw ConfigError("config: unknown local weight family '" + local_weight_family + "'");
}

BesovParams ExperimentConfig::make_besov(double s_value) const {
    BesovParams b;
    b.s = s_value;
    b.p = p;
    b.q = q;
    b.sigma = sigma > 0.0 ? sigma : default_sigma(s_value, regularity);
    b.delta = regularity > 1.0 ? 0.5 * (regularity - 1.0) : 0.5;
    b.validate_against_regularity(regularity);
    return b;
}

void ExperimentConfig::validate() const {
    if (grid_n < 8 || (grid_n & (grid_n - 1)) != 0)
        throw ConfigError("config: grid.n must be a power of two >= 8");
    if (corpus_size < 1) throw ConfigError("config: corpus.size must be >= 1");
    if (corpus_max_freq < 1 || corpus_max_freq >= static_cast<long>(grid_n) / 2)
        throw ConfigError("config: corpus.max_freq must fit inside the grid frequency range");
    if (filter_n_max < 0) throw ConfigError("config: filters.n_max must be >= 0");
    if (filter_max_freq < 1) throw ConfigError("config: filters.max_freq must be >= 1");
    if (truncations.empty()) throw ConfigError("config: spectrum.truncations must be nonempty");
    for (int k : truncations)
        if (k < 1) throw ConfigError("config: truncations must be positive");
    if (match_tol <= 0.0) throw ConfigError("config: spectrum.match_tol must be positive");
    if (orbit_n_max < 1) throw ConfigError("config: orbits.n_max must be >= 1");
    if (pressure_potential != "zero" && pressure_potential != "log_weight")
        throw ConfigError("config: orbits.potential must be zero or log_weight");
    if (ly_iterate < 1) throw ConfigError("config: corpus.iterate must be >= 1");
    if (kernel_max_block < 1 || kernel_max_block > 10)
        throw ConfigError("config: kernel.max_block must be in 1..10 (desk-scale pair budget)");
    if (kernel_grid_points < 5) throw ConfigError("config: kernel.grid_points must be >= 5");
    if (s_list.empty()) throw ConfigError("config: space.s_list must be nonempty");
    try {
        make_map();
        make_weight();
        make_branch();
        make_local_weight();
        make_besov();
        for (double sv : s_list) make_besov(sv);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

}  // namespace cspec
