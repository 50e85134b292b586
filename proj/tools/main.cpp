// circlespec: config-driven numerics for dyadic analysis and transfer
// operators of expanding circle maps. Exit codes: 0 ok, 1 runtime failure,
// 2 configuration/validation failure.
#include <CLI11.hpp>

#include <iostream>

#include "cspec/commands.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool out_set = false;
    bool quiet = false;
};

int dispatch(const std::string& name, const CommonFlags& flags) {
    cspec::ExperimentConfig cfg;
    if (!flags.config_path.empty())
        cfg = cspec::load_config(flags.config_path);
    else
        cfg.validate();
    if (flags.out_set) cfg.out_dir = flags.out_dir;
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.quiet) cfg.quiet = true;

    if (name == "filters") return cspec::cmd_filters(cfg, std::cout);
    if (name == "bounds") return cspec::cmd_bounds(cfg, std::cout);
    if (name == "spectrum") return cspec::cmd_spectrum(cfg, std::cout);
    if (name == "ly-verify") return cspec::cmd_ly_verify(cfg, std::cout);
    if (name == "kernel-decay") return cspec::cmd_kernel_decay(cfg, std::cout);
    if (name == "pressure") return cspec::cmd_pressure(cfg, std::cout);
    if (name == "report") return cspec::cmd_report(cfg, std::cout);
    std::cerr << "unknown command: " << name << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for transfer operators of expanding circle maps"};
    app.require_subcommand(1);

    CommonFlags flags;
    const char* names[] = {"filters", "bounds", "spectrum", "ly-verify",
                           "kernel-decay", "pressure", "report"};
    const char* descs[] = {"dump dyadic filter tables and partition residuals",
                           "essential-radius and thermodynamic bounds over an s sweep",
                           "Galerkin spectra and truncation-stable eigenvalues",
                           "verify the block-split norm inequality over a corpus",
                           "kernel decay constants and convolution-bound checks",
                           "periodic-orbit pressure sequences",
                           "combined summary report"};
    for (std::size_t i = 0; i < std::size(names); ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", flags.config_path, "experiment config file");
        sub->add_option("--out", flags.out_dir, "output directory (overrides config)")
            ->each([&](const std::string&) { flags.out_set = true; });
        sub->add_option("--seed", flags.seed, "RNG seed (overrides config)")
            ->each([&](const std::string&) { flags.seed_set = true; });
        sub->add_flag("--quiet", flags.quiet, "suppress progress notes");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return dispatch(app.get_subcommands().front()->get_name(), flags);
    } catch (const cspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
