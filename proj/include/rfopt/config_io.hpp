#pragma once

#include <istream>
#include <string>

#include "rfopt/core_types.hpp"

namespace rfopt {

/// Reads `key = value` (or `key value`) lines into `base`. Recognized keys are
/// n_antennas, n_users, p_max and p_c; '#' starts a comment. Unknown keys and
/// malformed values throw Error(kParseError). The result is not validated.
SystemConfig parse_config(std::istream& in, SystemConfig base = {});

SystemConfig load_config_file(const std::string& path, SystemConfig base = {});

}  // namespace rfopt
