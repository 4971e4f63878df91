#pragma once

#include <vector>

namespace epns {

// Dense one-phase primal simplex for  max c.x  s.t.  A x <= b, x >= 0,
// with b >= 0 (the all-slack basis is feasible). Bland's rule, so it
// terminates on degenerate inputs. Sized for the small oracle problems
// this project solves (tens of variables).
struct LpResult {
    bool optimal = false;
    double value = 0.0;
    std::vector<double> x;
};

LpResult solve_lp(const std::vector<double>& c, const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& b, int max_iter = 200000);

} // namespace epns
