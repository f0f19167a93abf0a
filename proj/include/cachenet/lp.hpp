#pragma once

#include "cachenet/types.hpp"

namespace cachenet {

// Dense linear program
//   min  cost' x
//   s.t. eq_lhs x == eq_rhs,  ineq_lhs x <= ineq_rhs,  x >= 0.
// Either constraint block may be empty (0 rows).
struct LinearProgram {
  Vec cost;
  Mat eq_lhs;
  Vec eq_rhs;
  Mat ineq_lhs;
  Vec ineq_rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double objective = 0.0;
};

// Two-phase primal simplex on the explicit tableau. Pivoting is Dantzig's
// rule with lowest-index tie-breaks, falling back to Bland's rule after a
// long degenerate streak, so runs are deterministic and terminate.
LpResult solve_lp(const LinearProgram& lp, double tol = 1e-9);

}  // namespace cachenet
