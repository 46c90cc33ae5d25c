#include "qlip/modulus.hpp"

#include <algorithm>
#include <cmath>

#include "qlip/error.hpp"
#include "qlip/lp.hpp"
#include "qlip/qp.hpp"
#include "qlip/tol.hpp"

namespace qlip {

namespace {

constexpr std::size_t kBoxCap = 20;  // 2^d vertex enumeration bound

Matrix inverse(const Matrix& M) {
  const std::size_t n = M.rows();
  LuFactors f = lu_factor(M);
  if (!f.nonsingular())
    throw Error(ErrorCode::SolverFailure, "inverse of a singular matrix");
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    Vector col = f.solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// max ||B1 a + v||_2 over ||a||_2 <= 1, by the secular equation on the
// KKT multiplier of the ball constraint (mu >= lambda_max for a global
// maximizer of the convex objective).
std::pair<double, Vector> ball_max_l2(const Matrix& B1, const Vector& v) {
  const std::size_t p = B1.cols();
  if (p == 0) return {norm(v, VectorNorm::L2), Vector{}};

  Matrix G = B1.transposed() * B1;
  Vector g = B1.transposed() * v;
  SymEig eig = sym_eig(G);
  const double lam1 = eig.values.front();
  const double gnorm = norm(g, VectorNorm::L2);

  auto evaluate = [&](const Vector& a) {
    Vector w = B1 * a;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += v[i];
    return norm(w, VectorNorm::L2);
  };

  if (lam1 <= 1e-14 && gnorm <= 1e-14)
    return {norm(v, VectorNorm::L2), Vector(p, 0.0)};

  Vector g_eig(p);
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < p; ++k) s += eig.vectors(k, i) * g[k];
    g_eig[i] = s;
  }

  const double gap_tol = 1e-10 * std::max(1.0, std::abs(lam1));
  std::vector<bool> in_top(p);
  double g_top_sq = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    in_top[i] = eig.values[i] >= lam1 - gap_tol;
    if (in_top[i]) g_top_sq += g_eig[i] * g_eig[i];
  }

  auto alpha_of_mu = [&](double mu) {
    Vector a(p);
    for (std::size_t i = 0; i < p; ++i) a[i] = g_eig[i] / (mu - eig.values[i]);
    return a;  // eigenbasis coordinates
  };
  auto to_ambient = [&](const Vector& a_eig) {
    Vector a(p, 0.0);
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t i = 0; i < p; ++i) a[k] += eig.vectors(k, i) * a_eig[i];
    return a;
  };

  // Hard case: the gradient has no component in the top eigenspace.
  if (std::sqrt(g_top_sq) <= 1e-12 * std::max(1.0, gnorm)) {
    Vector a_eig(p, 0.0);
    double nrm_sq = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      if (in_top[i]) continue;
      a_eig[i] = g_eig[i] / (lam1 - eig.values[i]);
      nrm_sq += a_eig[i] * a_eig[i];
    }
    if (nrm_sq <= 1.0) {
      // complete to the boundary along a top eigenvector
      for (std::size_t i = 0; i < p; ++i)
        if (in_top[i]) {
          a_eig[i] = std::sqrt(1.0 - nrm_sq);
          break;
        }
      Vector a = to_ambient(a_eig);
      return {evaluate(a), a};
    }
  }

  // Regular case: ||alpha(mu)|| = 1 has a unique root in (lam1, lam1+||g||].
  double lo = lam1, hi = lam1 + gnorm + 1e-30;
  auto phi = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      double den = mu - eig.values[i];
      s += (g_eig[i] * g_eig[i]) / (den * den);
    }
    return std::sqrt(s);
  };
  while (phi(hi) > 1.0) hi = lam1 + 2.0 * (hi - lam1);  // paranoia against rounding
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double f = phi(mu);
    if (std::abs(f - 1.0) <= 1e-12) break;
    if (f > 1.0)
      lo = mu;
    else
      hi = mu;
    // Newton step on 1/phi - 1 (convex in mu), safeguarded by bisection
    double dphi_sq = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      double den = mu - eig.values[i];
      dphi_sq += -2.0 * (g_eig[i] * g_eig[i]) / (den * den * den);
    }
    double dphi = dphi_sq / (2.0 * f);
    double h = 1.0 / f - 1.0;
    double dh = -dphi / (f * f);
    double next = dh != 0.0 ? mu - h / dh : 0.5 * (lo + hi);
    mu = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  Vector a = to_ambient(alpha_of_mu(mu));
  double an = norm(a, VectorNorm::L2);
  if (an > 1.0)
    for (double& x : a) x /= an;
  return {evaluate(a), a};
}

// max ||B1 a + v|| over the dual ball of var_norm.
std::pair<double, Vector> ball_max(const Matrix& B1, const Vector& v,
                                   VectorNorm var_norm) {
  const std::size_t p = B1.cols();
  auto evaluate = [&](const Vector& a) {
    Vector w = B1 * a;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += v[i];
    return norm(w, var_norm);
  };
  if (p == 0) return {norm(v, var_norm), Vector{}};

  switch (var_norm) {
    case VectorNorm::L2:
      return ball_max_l2(B1, v);
    case VectorNorm::L1: {
      // dual ball [-1,1]^p: enumerate vertices
      if (p > kBoxCap)
        throw Error(ErrorCode::SizeCapExceeded, "alpha vertex enumeration cap");
      double best = -1.0;
      Vector best_a;
      for (std::size_t mask = 0; mask < (std::size_t{1} << p); ++mask) {
        Vector a(p);
        for (std::size_t i = 0; i < p; ++i) a[i] = (mask >> i) & 1 ? 1.0 : -1.0;
        double val = evaluate(a);
        if (val > best) {
          best = val;
          best_a = a;
        }
      }
      return {best, best_a};
    }
    case VectorNorm::LInf: {
      // dual ball is the cross-polytope: vertices +-e_i
      double best = evaluate(Vector(p, 0.0));
      Vector best_a(p, 0.0);
      for (std::size_t i = 0; i < p; ++i)
        for (double s : {1.0, -1.0}) {
          Vector a(p, 0.0);
          a[i] = s;
          double val = evaluate(a);
          if (val > best) {
            best = val;
            best_a = a;
          }
        }
      return {best, best_a};
    }
  }
  return {0.0, Vector(p, 0.0)};
}

}  // namespace

BorderedKkt assemble_MD(const QpInstance& inst, const IndexSet& D) {
  const std::size_t n = inst.n;
  const std::size_t d = D.size();
  BorderedKkt out;
  out.D = D;
  out.M = Matrix(n + d, n + d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.M(i, j) = inst.Q(i, j);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double a = inst.A(static_cast<std::size_t>(D[i]), j);
      out.M(n + i, j) = a;
      out.M(j, n + i) = a;
    }
  return out;
}

bool md_nonsingular(const QpInstance& inst, const IndexSet& D) {
  BorderedKkt bk = assemble_MD(inst, D);
  bool by_lu = is_nonsingular(bk.M);

  // kernel criterion: ker Q meet ker A_D = ker [Q; A_D]
  Matrix stacked(inst.n + D.size(), inst.n);
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inst.n; ++j) stacked(i, j) = inst.Q(i, j);
  for (std::size_t i = 0; i < D.size(); ++i)
    for (std::size_t j = 0; j < inst.n; ++j)
      stacked(inst.n + i, j) = inst.A(static_cast<std::size_t>(D[i]), j);
  bool by_kernel = kernel_basis(stacked).empty();

  if (by_lu != by_kernel)
    throw Error(ErrorCode::InconsistentNumerics,
                "LU and kernel-intersection verdicts disagree for M_D");
  return by_lu;
}

OperatorNormResult operator_norm(const Matrix& B, VectorNorm var_norm, std::size_t d) {
  if (B.cols() < d)
    throw Error(ErrorCode::DimensionMismatch, "box dimension exceeds column count");
  if (d > kBoxCap)
    throw Error(ErrorCode::SizeCapExceeded, "box vertex enumeration cap (d <= 20)");
  const std::size_t p = B.cols() - d;
  const std::size_t n = B.rows();

  Matrix B1(n, p), B2(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) B1(i, j) = B(i, j);
    for (std::size_t j = 0; j < d; ++j) B2(i, j) = B(i, p + j);
  }

  OperatorNormResult best;
  best.value = -1.0;
  // (a, beta) -> (-a, -beta) symmetry halves the enumeration: fix the last
  // box coordinate to +1.
  const std::size_t count = d == 0 ? 1 : (std::size_t{1} << (d - 1));
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector beta(d);
    for (std::size_t i = 0; i + 1 < d; ++i) beta[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    if (d > 0) beta[d - 1] = 1.0;
    Vector v = B2 * beta;
    auto [val, a] = ball_max(B1, v, var_norm);
    if (val > best.value) {
      best.value = val;
      best.alpha_star = a;
      best.beta_star = beta;
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

double lip_SD(const QpInstance& inst, const IndexSet& D) {
  if (!md_nonsingular(inst, D)) return kInf;
  BorderedKkt bk = assemble_MD(inst, D);
  Matrix inv = inverse(bk.M);
  Matrix B(inst.n, inv.cols());
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) B(i, j) = inv(i, j);
  return operator_norm(B, inst.var_norm, D.size()).value;
}

namespace {

PerDEntry per_d_entry(const QpInstance& inst, const IndexSet& D) {
  PerDEntry e;
  e.D = D;
  e.nonsingular = md_nonsingular(inst, D);
  if (!e.nonsingular) return e;
  BorderedKkt bk = assemble_MD(inst, D);
  Matrix inv = inverse(bk.M);
  Matrix B(inst.n, inv.cols());
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) B(i, j) = inv(i, j);
  e.attaining_direction = operator_norm(B, inst.var_norm, D.size());
  e.lip = e.attaining_direction->value;
  return e;
}

}  // namespace

ModulusReport lip_modulus(const QpInstance& inst) {
  if (!slater_holds(inst.A, inst.b_bar))
    throw Error(ErrorCode::ScqFails, "Slater condition fails at the nominal b");

  ParamPoint nominal = nominal_point(inst);
  QpSolution sol = solve(inst, nominal);
  if (sol.status == QpStatus::Infeasible)
    throw Error(ErrorCode::NominalInfeasible, "nominal problem is infeasible");
  if (sol.status == QpStatus::UnboundedBelow)
    throw Error(ErrorCode::NominalUnbounded, "nominal problem is unbounded below");

  ModulusReport report;
  report.x_star = *sol.x;
  report.families = compute_families(inst, nominal, *sol.x);
  report.warnings = report.families.warnings;

  if (!*sol.unique) {
    report.aubin = false;
    report.modulus = kInf;
    report.warnings.push_back(
        "nominal optimal set is not a singleton; the Aubin property fails "
        "because it forces local single-valuedness");
    return report;
  }

  bool aubin = true;
  for (const IndexSet& D : report.families.extended) {
    PerDEntry e = per_d_entry(inst, D);
    aubin = aubin && e.nonsingular;
    report.per_D.push_back(std::move(e));
  }
  report.aubin = aubin;
  if (!aubin) {
    report.modulus = kInf;
    return report;
  }
  double best = -1.0;
  for (const PerDEntry& e : report.per_D) {
    if (e.lip > best) {
      best = e.lip;
      report.attaining_D = e.D;
    }
  }
  report.modulus = std::max(best, 0.0);
  return report;
}

RestrictedModulus lip_modulus_restricted(const QpInstance& inst, const IndexSet& D0) {
  ModulusReport report = lip_modulus(inst);
  auto in_extended = std::find(report.families.extended.begin(),
                               report.families.extended.end(), D0);
  if (in_extended == report.families.extended.end())
    throw Error(ErrorCode::D0NotInFamily, "D0 is not in the extended family");
  RestrictedModulus out;
  double best = -1.0;
  bool singular = false;
  for (const PerDEntry& e : report.per_D) {
    if (!is_subset(e.D, D0)) continue;
    if (!e.nonsingular) singular = true;
    if (e.lip > best) {
      best = e.lip;
      out.attaining_D = e.D;
    }
  }
  out.value = singular ? kInf : std::max(best, 0.0);
  return out;
}

LinearCaseNorms linear_case_norms(const QpInstance& inst, const IndexSet& D) {
  if (inst.Q.max_abs() > tol().feas)
    throw Error(ErrorCode::NotLinear, "Q must be zero for the linear-case norms");
  const std::size_t n = inst.n;
  if (D.size() != n)
    throw Error(ErrorCode::NotSquare, "A_D must be square");
  Matrix A_D = inst.A.select_rows(D);
  LuFactors f = lu_factor(A_D);
  if (!f.nonsingular())
    throw Error(ErrorCode::NotSquare, "A_D must be nonsingular");
  if (n > kBoxCap)
    throw Error(ErrorCode::SizeCapExceeded, "facet enumeration cap");

  Matrix Ainv = inverse(A_D);

  LinearCaseNorms out;

  // (1) direct: ||A_D^{-1}|| as the zero-alpha-block mixed norm
  Matrix B(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j + n) = Ainv(i, j);
  out.direct = operator_norm(B, inst.var_norm, n).value;

  // (2) dual minimum over the l1-sphere, facet by facet
  Matrix At = A_D.transposed();
  double facet_min = kInf;
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    Vector sigma(n);
    for (std::size_t i = 0; i + 1 < n; ++i) sigma[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    sigma[n - 1] = 1.0;  // +-sigma symmetry
    double val;
    if (dual(inst.var_norm) == VectorNorm::L2) {
      // min lambda' A A' lambda on the facet, as a QP
      Matrix Qf = A_D * At;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Qf(i, j) *= 2.0;
      Matrix G(n + 2, n);
      Vector h(n + 2);
      for (std::size_t j = 0; j < n; ++j) {
        G(0, j) = sigma[j];
        G(1, j) = -sigma[j];
        G(2 + j, j) = -sigma[j];
      }
      h[0] = 1.0;
      h[1] = -1.0;
      QpInstance facet = validate(n, n + 2, Qf, G, Vector(n, 0.0), h, VectorNorm::L2);
      QpSolution s = solve(facet, nominal_point(facet), /*compute_unique=*/false);
      if (s.status != QpStatus::Optimal)
        throw Error(ErrorCode::SolverFailure, "facet QP did not solve");
      val = std::sqrt(std::max(*s.value, 0.0));
    } else if (dual(inst.var_norm) == VectorNorm::LInf) {
      // min t s.t. -t <= (A'lambda)_j <= t, facet constraints; vars (lambda, t)
      Matrix G(2 * n + 2 + n, n + 1);
      Vector h(2 * n + 2 + n, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < n; ++j) {
          G(2 * r, j) = At(r, j);
          G(2 * r + 1, j) = -At(r, j);
        }
      for (std::size_t r = 0; r < n; ++r) {
        G(2 * r, n) = -1.0;
        G(2 * r + 1, n) = -1.0;
      }
      for (std::size_t j = 0; j < n; ++j) {
        G(2 * n, j) = sigma[j];
        G(2 * n + 1, j) = -sigma[j];
        G(2 * n + 2 + j, j) = -sigma[j];
      }
      h[2 * n] = 1.0;
      h[2 * n + 1] = -1.0;
      Vector cc(n + 1, 0.0);
      cc[n] = 1.0;
      LpResult s = solve_lp(cc, G, h);
      if (s.status != LpStatus::Optimal)
        throw Error(ErrorCode::SolverFailure, "facet LP did not solve");
      val = *s.objective;
    } else {
      // dual norm is l1: min sum s_j s.t. +-(A'lambda)_j <= s_j; vars (lambda, s)
      Matrix G(2 * n + 2 + n, 2 * n);
      Vector h(2 * n + 2 + n, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < n; ++j) {
          G(2 * r, j) = At(r, j);
          G(2 * r + 1, j) = -At(r, j);
        }
      for (std::size_t r = 0; r < n; ++r) {
        G(2 * r, n + r) = -1.0;
        G(2 * r + 1, n + r) = -1.0;
      }
      for (std::size_t j = 0; j < n; ++j) {
        G(2 * n, j) = sigma[j];
        G(2 * n + 1, j) = -sigma[j];
        G(2 * n + 2 + j, j) = -sigma[j];
      }
      h[2 * n] = 1.0;
      h[2 * n + 1] = -1.0;
      Vector cc(2 * n, 0.0);
      for (std::size_t r = 0; r < n; ++r) cc[n + r] = 1.0;
      LpResult s = solve_lp(cc, G, h);
      if (s.status != LpStatus::Optimal)
        throw Error(ErrorCode::SolverFailure, "facet LP did not solve");
      val = *s.objective;
    }
    facet_min = std::min(facet_min, val);
  }
  out.dual_min = 1.0 / facet_min;

  // (3) dual distance to the boundary of conv{+-a_i}: the facet of sign
  // pattern sigma lies on {y : (A_D^{-1} sigma)' y = 1}, so the distance is
  // 1 / max_sigma ||A_D^{-1} sigma||.
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    Vector sigma(n);
    for (std::size_t i = 0; i + 1 < n; ++i) sigma[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    sigma[n - 1] = 1.0;
    best = std::max(best, norm(Ainv * sigma, inst.var_norm));
  }
  out.distance_form = best;
  return out;
}

ProjectionReport lip_projection(const Matrix& A, const Vector& b, const Vector& z) {
  if (!slater_holds(A, b))
    throw Error(ErrorCode::ScqFails, "Slater condition fails at b");
  QpInstance inst = projection_instance(z, A, b);
  ProjectionReport report;
  report.generic = lip_modulus(inst);
  report.projection = report.generic.x_star;

  const std::size_t n = inst.n;
  double best = -1.0;
  for (const IndexSet& D : report.generic.families.extended) {
    const std::size_t d = D.size();
    Matrix B(n, n + d);
    if (d == 0) {
      for (std::size_t i = 0; i < n; ++i) B(i, i) = 1.0;
    } else {
      Matrix A_D = inst.A.select_rows(D);
      Matrix At = A_D.transposed();
      Matrix R = At * inverse(A_D * At);  // n x d
      Matrix P = R * A_D;                 // A_D'(A_D A_D')^{-1} A_D
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          B(i, j) = (i == j ? 1.0 : 0.0) - P(i, j);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) B(i, n + j) = R(i, j);
    }
    best = std::max(best, operator_norm(B, VectorNorm::L2, d).value);
  }
  report.closed_form = std::max(best, 0.0);

  if (std::abs(report.closed_form - report.generic.modulus) >
      tol().norm * std::max(1.0, report.generic.modulus))
    throw Error(ErrorCode::InconsistentNumerics,
                "closed-form and generic projection moduli disagree");
  return report;
}

}  // namespace qlip
