#pragma once

#include <iosfwd>
#include <string>

#include "vrsim/engine.hpp"

namespace vrsim {

/// JSON run configuration. Delays are given in milliseconds and power ratios
/// in dB in the file; internally everything is seconds and linear. Comments
/// are allowed, an empty file or object yields the defaults, and unknown or
/// ill-typed fields are rejected by name.
RunConfig load_config(std::istream& in);
RunConfig load_config_file(const std::string& path);

void save_config(const RunConfig& cfg, std::ostream& out);

}  // namespace vrsim
