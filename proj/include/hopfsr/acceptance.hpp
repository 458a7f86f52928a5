// hopfsr/acceptance.hpp
//
// End-to-end acceptance suite.  Each criterion exercises one guarantee of
// the library at a pinned tolerance and reports pass/fail with a short
// diagnostic; run_acceptance evaluates all of them (sharing the expensive
// detector grid) in a fixed order.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hopfsr {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace hopfsr
