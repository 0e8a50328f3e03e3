#pragma once

#include <stdexcept>
#include <vector>

namespace e2rc {

class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// maximize c.x  subject to  rows.x >= rhs (per row), sum(x) = 1, x >= 0
struct LpProblem {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
};

/// Dense two-phase primal simplex. Throws infeasible_error when the
/// constraint set admits no distribution.
LpResult solve_simplex(const LpProblem& lp);

}  // namespace e2rc
