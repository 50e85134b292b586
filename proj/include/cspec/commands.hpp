// Command implementations behind the CLI; each writes its files under
// cfg.out_dir and returns a process exit code.
#ifndef CSPEC_COMMANDS_HPP
#define CSPEC_COMMANDS_HPP

#include <iosfwd>

#include "cspec/config.hpp"

namespace cspec {

int cmd_filters(const ExperimentConfig& cfg, std::ostream& log);
int cmd_bounds(const ExperimentConfig& cfg, std::ostream& log);
int cmd_spectrum(const ExperimentConfig& cfg, std::ostream& log);
int cmd_ly_verify(const ExperimentConfig& cfg, std::ostream& log);
int cmd_kernel_decay(const ExperimentConfig& cfg, std::ostream& log);
int cmd_pressure(const ExperimentConfig& cfg, std::ostream& log);
int cmd_report(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace cspec

#endif
