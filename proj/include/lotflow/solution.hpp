#pragma once

#include <string>
#include <vector>

#include "lotflow/core_model.hpp"

namespace lotflow {

// One accepted plan modification: "Adj1" (split a cycle), "Adj2" (insert an
// earlier cycle), "Adj3" (delay the first launch) or "Cor2" (pull production
// forward to a cheaper period). `periods` lists the cycle starts involved.
struct Adjustment {
  std::string kind;
  std::vector<int> periods;
};

struct Solution {
  Trajectory trajectory;
  double objective = 0.0;
  int lp_count = 0;
  std::vector<Adjustment> adjustments;
  // Set when no feasible plan was found and the null plan is reported.
  bool degenerate = false;
};

}  // namespace lotflow
