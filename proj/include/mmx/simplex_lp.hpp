#pragma once

#include <vector>

namespace mmx {

/// One affine row a.lambda + b, used either as an upper bound on the
/// objective variable (t <= a.lambda + b) or as a feasibility cut
/// (0 <= a.lambda + b).
struct LpRow {
  std::vector<double> a;
  double b = 0.0;
};

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  double value = 0.0;             // optimal t
  std::vector<double> lambda;     // optimizer on the simplex
};

/// Dense two-phase primal simplex with Bland's rule, specialized to
///   maximize t  s.t.  t <= a_r.lambda + b_r  (upper rows),
///                     0 <= g_r.lambda + h_r  (feas rows),
///                     lambda in the n-simplex.
/// No upper rows means the objective is unbounded above whenever the
/// feasible set is nonempty.
LpResult maximize_over_simplex(std::size_t n, const std::vector<LpRow>& upper,
                               const std::vector<LpRow>& feas);

/// minimize t s.t. t >= a_r.lambda + b_r (lower rows), lambda in the simplex.
LpResult minimize_over_simplex(std::size_t n, const std::vector<LpRow>& lower,
                               const std::vector<LpRow>& feas);

}  // namespace mmx
