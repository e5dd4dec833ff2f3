#pragma once

#include <string>

namespace igrf::acceptance {

struct CriterionResult {
  bool skipped = false;
  bool passed = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 10;

const char* criterion_title(int n);
CriterionResult run_criterion(int n);

}  // namespace igrf::acceptance
