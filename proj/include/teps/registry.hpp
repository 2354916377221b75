#pragma once

#include <string>
#include <vector>

namespace teps {

// One reference comparison: |value - reference| <= tol, unless a custom rule applies (see note).
struct Check {
  std::string id;
  double value = 0.0;
  double reference = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct CriterionReport {
  int number = 0;
  std::string title;
  std::vector<Check> checks;
  std::string detail;  // criterion-level verdict rule, when it is not "every check passes"
  bool verdict = false;

  bool pass() const { return verdict; }
};

inline constexpr int kCriterionCount = 10;

CriterionReport run_criterion(int n);

std::string format_check(const Check& c);
std::string format_summary(const CriterionReport& r);

}  // namespace teps
