#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covlab {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  int passed() const;
  int failed() const;
};

/// Quick invariant suites over every module; each check prints one line.
SelftestReport run_selftest(std::ostream* log = nullptr);

}  // namespace covlab
