#pragma once

#include <string>

#include "demon/sweep.hpp"

// JSON run-configuration loading. The schema mirrors the domain types
// one-to-one; see README.md for the documented field list. Support cutoffs
// accept the strings "inf" / "-inf" for unbounded spectral densities.

namespace demon {

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

}  // namespace demon
