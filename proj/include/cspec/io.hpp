// CSV helpers with RFC-4180-style quoting and full-precision numbers.
#ifndef CSPEC_IO_HPP
#define CSPEC_IO_HPP

#include <fstream>
#include <string>
#include <vector>

#include "cspec/util.hpp"

namespace cspec {

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

/// Opens path for writing, throws on failure.
std::ofstream open_out(const std::string& path);

/// Create the directory (and parents) if missing; throws on failure.
void ensure_dir(const std::string& path);

}  // namespace cspec

#endif
