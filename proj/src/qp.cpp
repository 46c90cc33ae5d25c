#include "qlip/qp.hpp"

#include <algorithm>
#include <cmath>

#include "qlip/error.hpp"
#include "qlip/tol.hpp"

namespace qlip {

namespace {

bool rows_independent(const Matrix& A_D) {
  if (A_D.rows() == 0) return true;
  if (A_D.rows() > A_D.cols()) return false;
  return kernel_basis(A_D.transposed()).empty();
}

Matrix bordered_matrix(const Matrix& Q, const Matrix& A_D) {
  const std::size_t n = Q.rows();
  const std::size_t d = A_D.rows();
  Matrix M(n + d, n + d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = Q(i, j);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      M(n + i, j) = A_D(i, j);
      M(j, n + i) = A_D(i, j);
    }
  return M;
}

struct Candidate {
  Vector x;
  Vector lambda;
};

// Solutions of M_D (x; lambda) = (-c; b_D) with lambda >= 0 and A x <= b,
// if any.  The singular branch parameterizes the affine solution set via the
// eigen-kernel and asks the LP kernel for a feasible point.
std::optional<Candidate> kkt_candidate(const Matrix& Q, const Matrix& A,
                                       const Vector& b, const Vector& c,
                                       const Matrix& A_D, const Vector& b_D) {
  const std::size_t n = Q.rows();
  const std::size_t d = A_D.rows();
  const std::size_t m = A.rows();
  Matrix M = bordered_matrix(Q, A_D);
  Vector rhs(n + d);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -c[i];
  for (std::size_t i = 0; i < d; ++i) rhs[n + i] = b_D[i];

  auto accept = [&](const Vector& w) -> std::optional<Candidate> {
    Candidate cand;
    cand.x.assign(w.begin(), w.begin() + static_cast<long>(n));
    cand.lambda.assign(w.begin() + static_cast<long>(n), w.end());
    for (double l : cand.lambda)
      if (l < -tol().feas) return std::nullopt;
    Vector ax = A * cand.x;
    for (std::size_t i = 0; i < m; ++i)
      if (ax[i] > b[i] + tol().feas * (1.0 + std::abs(b[i]))) return std::nullopt;
    return cand;
  };

  LuFactors f = lu_factor(M);
  if (f.nonsingular()) return accept(f.solve(rhs));

  // Singular bordered system: least-norm particular solution via the
  // eigendecomposition, then search the kernel for a sign/feasibility match.
  SymEig eig = sym_eig(M);
  double emax = 0.0;
  for (double v : eig.values) emax = std::max(emax, std::abs(v));
  const double ethresh = tol().pivot * std::max(1.0, emax) * 10.0;
  Vector w0(n + d, 0.0);
  std::vector<Vector> kernel;
  for (std::size_t j = 0; j < n + d; ++j) {
    Vector uj(n + d);
    for (std::size_t i = 0; i < n + d; ++i) uj[i] = eig.vectors(i, j);
    if (std::abs(eig.values[j]) <= ethresh) {
      kernel.push_back(std::move(uj));
      continue;
    }
    double coef = dot(uj, rhs) / eig.values[j];
    for (std::size_t i = 0; i < n + d; ++i) w0[i] += coef * uj[i];
  }
  Vector res = M * w0;
  for (std::size_t i = 0; i < n + d; ++i) res[i] -= rhs[i];
  if (norm_inf(res) > tol().resid * (1.0 + norm_inf(rhs)))
    return std::nullopt;  // inconsistent system, skip this D

  if (kernel.empty()) return accept(w0);

  const std::size_t K = kernel.size();
  // feasibility LP in kernel coordinates t: lambda(t) >= 0, A x(t) <= b
  Matrix G(d + m, K);
  Vector h(d + m);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < K; ++k) G(r, k) = -kernel[k][n + r];
    h[r] = w0[n + r];
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += A(i, j) * kernel[k][j];
      G(d + i, k) = s;
    }
    double ax0 = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax0 += A(i, j) * w0[j];
    h[d + i] = b[i] - ax0;
  }
  LpResult r = solve_lp(Vector(K, 0.0), G, h);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  Vector w = w0;
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < n + d; ++i) w[i] += (*r.x)[k] * kernel[k][i];
  return accept(w);
}

QpSolution solve_raw(const QpInstance& inst, const Matrix& A, const Vector& b,
                     const Vector& c, const IndexSet& row_labels,
                     bool compute_unique) {
  const std::size_t n = inst.n;
  const std::size_t m = A.rows();
  IndexSet pool(m);
  for (std::size_t i = 0; i < m; ++i) pool[i] = static_cast<int>(i);

  for (const IndexSet& D : subsets_by_cardinality(pool, n)) {
    Matrix A_D = A.select_rows(D);
    if (!rows_independent(A_D)) continue;
    Vector b_D(D.size());
    for (std::size_t i = 0; i < D.size(); ++i)
      b_D[i] = b[static_cast<std::size_t>(D[i])];
    auto cand = kkt_candidate(inst.Q, A, b, c, A_D, b_D);
    if (!cand) continue;

    QpSolution sol;
    sol.status = QpStatus::Optimal;
    sol.x = cand->x;
    sol.value = objective_value(inst, c, cand->x);
    KktCertificate cert;
    cert.D.resize(D.size());
    for (std::size_t i = 0; i < D.size(); ++i)
      cert.D[i] = row_labels[static_cast<std::size_t>(D[i])];
    cert.lambda = cand->lambda;
    cert.x = cand->x;
    sol.certificate = std::move(cert);
    if (compute_unique) {
      QpInstance sub = inst;
      sub.m = m;
      sub.A = A;
      sub.b_bar = b;
      sub.c_bar = c;
      sol.unique = optimal_set_is_singleton(sub, ParamPoint{c, b}, cand->x);
    }
    return sol;
  }

  LpResult feas = solve_lp(Vector(n, 0.0), A, b);
  QpSolution sol;
  sol.status = feas.status == LpStatus::Optimal ? QpStatus::UnboundedBelow
                                                : QpStatus::Infeasible;
  return sol;
}

}  // namespace

double objective_value(const QpInstance& inst, const Vector& c, const Vector& x) {
  Vector qx = inst.Q * x;
  return 0.5 * dot(x, qx) + dot(c, x);
}

QpSolution solve(const QpInstance& inst, const ParamPoint& p, bool compute_unique) {
  IndexSet labels(inst.m);
  for (std::size_t i = 0; i < inst.m; ++i) labels[i] = static_cast<int>(i);
  return solve_raw(inst, inst.A, p.b, p.c, labels, compute_unique);
}

QpSolution solve_subproblem(const QpInstance& inst, const IndexSet& D,
                            const Vector& c, const Vector& b_D,
                            bool compute_unique) {
  if (b_D.size() != D.size())
    throw Error(ErrorCode::DimensionMismatch, "b_D length differs from |D|");
  return solve_raw(inst, inst.A.select_rows(D), b_D, c, D, compute_unique);
}

KktCheck verify_kkt(const QpInstance& inst, const ParamPoint& p, const Vector& x) {
  Vector ax = inst.A * x;
  IndexSet active;
  for (std::size_t i = 0; i < inst.m; ++i) {
    double resid = ax[i] - p.b[i];
    if (resid > tol().feas * (1.0 + std::abs(p.b[i])))
      return KktCheck{{}, KktFailure::InfeasiblePoint};
    if (std::abs(resid) <= tol().act * (1.0 + std::abs(p.b[i])))
      active.push_back(static_cast<int>(i));
  }
  Vector g = inst.Q * x;
  for (std::size_t j = 0; j < inst.n; ++j) g[j] = -(g[j] + p.c[j]);
  std::vector<Vector> gens;
  for (int i : active) gens.push_back(inst.constraint_row(static_cast<std::size_t>(i)));
  auto lambda = in_cone(g, gens);
  if (!lambda) return KktCheck{{}, KktFailure::StationarityFails};

  KktCertificate cert;
  cert.x = x;
  for (std::size_t k = 0; k < active.size(); ++k) {
    if ((*lambda)[k] > tol().feas) {
      cert.D.push_back(active[k]);
      cert.lambda.push_back((*lambda)[k]);
    }
  }
  return KktCheck{std::move(cert), {}};
}

bool certificate_valid(const QpInstance& inst, const ParamPoint& p,
                       const KktCertificate& cert) {
  const double ft = tol().feas;
  Vector ax = inst.A * cert.x;
  for (std::size_t i = 0; i < inst.m; ++i)
    if (ax[i] > p.b[i] + ft * (1.0 + std::abs(p.b[i]))) return false;
  for (std::size_t k = 0; k < cert.D.size(); ++k) {
    std::size_t i = static_cast<std::size_t>(cert.D[k]);
    if (std::abs(ax[i] - p.b[i]) > ft * (1.0 + std::abs(p.b[i]))) return false;
    if (cert.lambda[k] < -ft) return false;
  }
  Vector station = inst.Q * cert.x;
  for (std::size_t j = 0; j < inst.n; ++j) station[j] += p.c[j];
  for (std::size_t k = 0; k < cert.D.size(); ++k) {
    Vector row = inst.constraint_row(static_cast<std::size_t>(cert.D[k]));
    for (std::size_t j = 0; j < inst.n; ++j) station[j] += cert.lambda[k] * row[j];
  }
  double scale = 1.0 + norm_inf(p.c);
  return norm_inf(station) <= 100.0 * ft * scale;
}

}  // namespace qlip
