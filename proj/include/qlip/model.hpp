#pragma once

#include <cstddef>

#include "qlip/linalg.hpp"

namespace qlip {

/// Canonically perturbed convex QP: minimize 1/2 x'Qx + c'x over {Ax <= b},
/// with Q and A fixed and (c, b) the perturbable parameter.
struct QpInstance {
  std::size_t n = 0;  // variables
  std::size_t m = 0;  // constraints
  Matrix Q;           // n x n, symmetric PSD
  Matrix A;           // m x n
  Vector c_bar;       // nominal objective vector
  Vector b_bar;       // nominal right-hand side
  VectorNorm var_norm = VectorNorm::L2;

  Vector constraint_row(std::size_t i) const { return A.row(i); }
};

struct ParamPoint {
  Vector c;
  Vector b;
};

/// Validates raw data, symmetrizing Q when the asymmetry is within tolerance.
/// Throws Error with NOT_SYMMETRIC / NOT_PSD / DIMENSION_MISMATCH / NONFINITE.
QpInstance validate(std::size_t n, std::size_t m, Matrix Q, Matrix A, Vector c,
                    Vector b, VectorNorm var_norm);

ParamPoint nominal_point(const QpInstance& inst);

/// max{ ||c2-c1||_*, ||b2-b1||_inf } -- the parameter-space metric.
double param_distance(const ParamPoint& p1, const ParamPoint& p2,
                      const QpInstance& inst);

/// Euclidean projection of z onto {x : Ax <= b} as a QP (Q = I, c = -z).
QpInstance projection_instance(const Vector& z, const Matrix& A, const Vector& b);

}  // namespace qlip
