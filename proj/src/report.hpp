// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ordertau {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Ordered list of named pass/fail results from a verification suite.
struct CheckReport {
  std::vector<Check> checks;

  void add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  int failed_count() const {
    int n = 0;
    for (const auto& c : checks)
      if (!c.pass) ++n;
    return n;
  }
  bool all_pass() const { return failed_count() == 0; }
};

}  // namespace ordertau
