#pragma once

#include <optional>

#include "qlip/indexset.hpp"
#include "qlip/linalg.hpp"
#include "qlip/lp.hpp"
#include "qlip/model.hpp"

namespace qlip {

/// KKT witness: A_D x = b_D, Ax <= b, Qx + c + A_D' lambda = 0, lambda >= 0.
struct KktCertificate {
  IndexSet D;
  Vector lambda;  // indexed along D
  Vector x;
};

enum class QpStatus { Optimal, Infeasible, UnboundedBelow };

struct QpSolution {
  QpStatus status = QpStatus::Infeasible;
  std::optional<Vector> x;
  std::optional<double> value;
  std::optional<bool> unique;
  std::optional<KktCertificate> certificate;
};

/// Solves the convex QP at parameter p by enumerating KKT index sets
/// (cardinality-then-lexicographic), accepting the first certificate.
QpSolution solve(const QpInstance& inst, const ParamPoint& p,
                 bool compute_unique = true);

enum class KktFailure { InfeasiblePoint, StationarityFails };

struct KktCheck {
  std::optional<KktCertificate> certificate;
  std::optional<KktFailure> failure;
};

/// Verifies optimality of x at p; the certificate keeps only indices with
/// strictly positive multipliers.
KktCheck verify_kkt(const QpInstance& inst, const ParamPoint& p, const Vector& x);

/// Solves the subproblem P_D(c, b_D): same objective, constraints restricted
/// to rows in D.  The returned certificate's indices refer to the original
/// constraint numbering.
QpSolution solve_subproblem(const QpInstance& inst, const IndexSet& D,
                            const Vector& c, const Vector& b_D,
                            bool compute_unique = true);

double objective_value(const QpInstance& inst, const Vector& c, const Vector& x);

bool certificate_valid(const QpInstance& inst, const ParamPoint& p,
                       const KktCertificate& cert);

}  // namespace qlip
