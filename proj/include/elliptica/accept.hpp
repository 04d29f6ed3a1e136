#pragma once

#include "elliptica/tolerances.hpp"

#include <string>
#include <vector>

namespace elliptica::accept {

/// Quick keeps every check but shrinks the random sample counts so the whole
/// battery finishes in well under a minute; Full runs the release gate.
enum class Level { Quick, Full };

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the whole verification battery.  Criteria never throw: any escaped
/// exception is converted into a failed result carrying the message.
std::vector<CriterionResult> run_all(Level level,
                                     const Tolerances& tol = default_tolerances());

bool all_pass(const std::vector<CriterionResult>& results);

/// "PASS criterion 3 [sp4-alcove-geometry] ..." one-line rendering.
std::string format_line(const CriterionResult& r);

}  // namespace elliptica::accept
