#pragma once

#include "flexcross/spaces.hpp"

namespace flexcross {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  double objective = 0.0;
};

// Dense two-phase simplex for   minimize c·x  subject to  A x = b, x >= 0.
// Bland's rule keeps it cycle-free; intended for the tiny feasibility problems
// of the intersection tests (a few dozen variables).
LpResult solve_lp(const Mat& A, const Vec& b, const Vec& c, double tol = 1e-12);

}  // namespace flexcross
