#include "qlip/model.hpp"

#include <algorithm>
#include <cmath>

#include "qlip/error.hpp"
#include "qlip/tol.hpp"

namespace qlip {

QpInstance validate(std::size_t n, std::size_t m, Matrix Q, Matrix A, Vector c,
                    Vector b, VectorNorm var_norm) {
  if (Q.rows() != n || Q.cols() != n || A.rows() != m || A.cols() != n ||
      c.size() != n || b.size() != m)
    throw Error(ErrorCode::DimensionMismatch, "instance dimensions do not match n/m");
  if (!Q.all_finite() || !A.all_finite() ||
      std::any_of(c.begin(), c.end(), [](double v) { return !std::isfinite(v); }) ||
      std::any_of(b.begin(), b.end(), [](double v) { return !std::isfinite(v); }))
    throw Error(ErrorCode::Nonfinite, "instance contains non-finite entries");

  const double scale = std::max(1.0, Q.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(Q(i, j) - Q(j, i)) > tol().sym * scale)
        throw Error(ErrorCode::NotSymmetric, "Q is not symmetric");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (Q(i, j) + Q(j, i));
      Q(i, j) = Q(j, i) = v;
    }

  if (n > 0) {
    SymEig eig = sym_eig(Q);
    double lo = eig.values.back();
    double hi = eig.values.front();
    if (lo < -tol().psd * std::max(1.0, hi))
      throw Error(ErrorCode::NotPsd, "Q has a negative eigenvalue");
  }

  QpInstance inst;
  inst.n = n;
  inst.m = m;
  inst.Q = std::move(Q);
  inst.A = std::move(A);
  inst.c_bar = std::move(c);
  inst.b_bar = std::move(b);
  inst.var_norm = var_norm;
  return inst;
}

ParamPoint nominal_point(const QpInstance& inst) {
  return ParamPoint{inst.c_bar, inst.b_bar};
}

double param_distance(const ParamPoint& p1, const ParamPoint& p2,
                      const QpInstance& inst) {
  if (p1.c.size() != p2.c.size() || p1.b.size() != p2.b.size())
    throw Error(ErrorCode::DimensionMismatch, "parameter points differ in shape");
  Vector dc(p1.c.size()), db(p1.b.size());
  for (std::size_t i = 0; i < dc.size(); ++i) dc[i] = p2.c[i] - p1.c[i];
  for (std::size_t i = 0; i < db.size(); ++i) db[i] = p2.b[i] - p1.b[i];
  return std::max(dual_norm(dc, inst.var_norm), norm_inf(db));
}

QpInstance projection_instance(const Vector& z, const Matrix& A, const Vector& b) {
  const std::size_t n = z.size();
  if (A.cols() != n || A.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "projection data not conformable");
  Vector c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = -z[i];
  return validate(n, A.rows(), Matrix::identity(n), A, std::move(c), b,
                  VectorNorm::L2);
}

}  // namespace qlip
