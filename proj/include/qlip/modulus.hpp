#pragma once

#include <limits>
#include <optional>
#include <string>

#include "qlip/families.hpp"
#include "qlip/indexset.hpp"
#include "qlip/linalg.hpp"
#include "qlip/model.hpp"

namespace qlip {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Bordered KKT matrix M_D = [[Q, A_D'], [A_D, 0]]; M_{} = Q.
struct BorderedKkt {
  IndexSet D;
  Matrix M;
};

BorderedKkt assemble_MD(const QpInstance& inst, const IndexSet& D);

/// Nonsingularity by LU and by the kernel-intersection criterion
/// ker Q meet ker A_D = {0}; the two verdicts must agree.
bool md_nonsingular(const QpInstance& inst, const IndexSet& D);

/// Exact maximum of ||B1 a + B2 beta|| over the dual-norm unit ball (a) and
/// the infinity-ball (beta), with the attaining direction.
struct OperatorNormResult {
  double value = 0.0;
  Vector alpha_star;  // dual-ball maximizer (size cols - d)
  Vector beta_star;   // box vertex (size d, entries in {-1, +1})
};

OperatorNormResult operator_norm(const Matrix& B, VectorNorm var_norm, std::size_t d);

/// lip S_D = ||(I 0) M_D^{-1}|| (+inf when M_D is singular).
double lip_SD(const QpInstance& inst, const IndexSet& D);

struct PerDEntry {
  IndexSet D;
  bool nonsingular = false;
  double lip = kInf;
  std::optional<OperatorNormResult> attaining_direction;
};

struct ModulusReport {
  bool aubin = false;
  double modulus = kInf;
  Vector x_star;
  IndexFamilies families;
  std::vector<PerDEntry> per_D;
  std::optional<IndexSet> attaining_D;
  std::vector<std::string> warnings;
};

/// The full pipeline: SCQ, nominal solve, singleton check, families, per-D
/// norms, and the point-based modulus (max over the extended family).
ModulusReport lip_modulus(const QpInstance& inst);

struct RestrictedModulus {
  double value = kInf;
  std::optional<IndexSet> attaining_D;
};

/// lip S_{D0}: maximum of lip S_D over extended-family members inside D0.
RestrictedModulus lip_modulus_restricted(const QpInstance& inst, const IndexSet& D0);

/// The three linear-case expressions for ||A_D^{-1}||; they must agree.
struct LinearCaseNorms {
  double direct = 0.0;
  double dual_min = 0.0;
  double distance_form = 0.0;
};

LinearCaseNorms linear_case_norms(const QpInstance& inst, const IndexSet& D);

struct ProjectionReport {
  Vector projection;
  ModulusReport generic;         // generic pipeline on the Q = I instance
  double closed_form = kInf;     // via (I - A_D'(A_D A_D')^{-1} A_D | A_D'(A_D A_D')^{-1})
};

/// Lipschitz modulus of the metric projection onto {x : Ax <= b} at z,
/// by the closed-form blocks, cross-checked against the generic path.
ProjectionReport lip_projection(const Matrix& A, const Vector& b, const Vector& z);

}  // namespace qlip
