// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace ordertau {

// Malformed textual input (model specs, rational strings).
struct parse_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation is well-formed but not defined for the given model variant.
struct unsupported_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ordertau
