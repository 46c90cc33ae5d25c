#pragma once

#include <optional>

#include "qlip/linalg.hpp"
#include "qlip/model.hpp"

namespace qlip {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::optional<Vector> x;
  std::optional<double> objective;
};

/// minimize c'x subject to Gx <= h, x free.  Two-phase primal simplex with
/// Bland's rule; termination is guaranteed, speed is irrelevant at desk scale.
LpResult solve_lp(const Vector& c, const Matrix& G, const Vector& h);

/// True iff the system {a_i'y < b_i for all i} has a solution.
bool slater_holds(const Matrix& A, const Vector& b);

/// True iff 0 lies in conv{generators}; conv of the empty set is empty.
bool zero_in_conv(const std::vector<Vector>& generators);

/// Nonnegative multipliers with sum_i lambda_i g_i = v, if any.
/// cone(empty) = {0}, so an empty generator list matches only v = 0.
std::optional<Vector> in_cone(const Vector& v, const std::vector<Vector>& generators);

/// Decides whether the optimal set {x in F(b) : Qx = Qx*, c'x = c'x*}
/// collapses to {x*} by maximizing each +-x_j over it.
bool optimal_set_is_singleton(const QpInstance& inst, const ParamPoint& p,
                              const Vector& x_star);

}  // namespace qlip
