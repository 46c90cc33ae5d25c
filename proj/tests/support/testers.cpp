#include "support/testers.hpp"

#include <algorithm>
#include <cmath>

#include "qlip/error.hpp"
#include "qlip/lp.hpp"
#include "qlip/tol.hpp"

namespace qtest {

Vector random_vector(Rng& rng, std::size_t k, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(k);
  for (double& x : v) x = dist(rng);
  return v;
}

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) M(i, j) = dist(rng);
  return M;
}

QpInstance random_strongly_convex(Rng& rng, std::size_t n, std::size_t m,
                                  VectorNorm norm) {
  std::uniform_real_distribution<double> mu_dist(0.2, 1.0);
  Matrix R = random_matrix(rng, n, n);
  Matrix Q = R.transposed() * R;
  double mu = mu_dist(rng);
  for (std::size_t i = 0; i < n; ++i) Q(i, i) += mu;
  Matrix A = random_matrix(rng, m, n);
  Vector x0 = random_vector(rng, n);
  Vector b = A * x0;
  std::uniform_real_distribution<double> slack(0.05, 1.0);
  for (double& v : b) v += slack(rng);
  Vector c = random_vector(rng, n);
  return validate(n, m, std::move(Q), std::move(A), std::move(c), std::move(b), norm);
}

GraphInstance random_graph_instance(Rng& rng, std::size_t n, std::size_t m,
                                    VectorNorm norm) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 500; ++attempt) {
    // possibly rank-deficient PSD Q
    std::size_t rank = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
    rank = std::min(rank, n);
    Matrix R = random_matrix(rng, rank, n);
    Matrix Q = R.transposed() * R;
    Matrix A = random_matrix(rng, m, n);
    Vector x_bar = random_vector(rng, n);

    std::size_t n_active =
        static_cast<std::size_t>(unit(rng) * static_cast<double>(std::min(n, m) + 1));
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    Vector c = Q * x_bar;
    for (double& v : c) v = -v;
    Vector b = A * x_bar;
    std::uniform_real_distribution<double> slack(0.1, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      bool active = std::find(order.begin(), order.begin() + static_cast<long>(n_active),
                              i) != order.begin() + static_cast<long>(n_active);
      if (active) {
        double lambda = unit(rng) < 0.3 ? 0.0 : unit(rng);  // some zero multipliers
        Vector row = A.row(i);
        for (std::size_t j = 0; j < n; ++j) c[j] -= lambda * row[j];
      } else {
        b[i] += slack(rng);
      }
    }
    if (!slater_holds(A, b)) continue;
    try {
      GraphInstance g;
      g.inst = validate(n, m, Q, A, c, b, norm);
      g.x_bar = x_bar;
      QpSolution sol = solve(g.inst, nominal_point(g.inst), /*compute_unique=*/false);
      if (sol.status != QpStatus::Optimal) continue;
      return g;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorCode::SolverFailure, "graph-instance generator exhausted retries");
}

std::optional<QpInstance> random_aubin_instance(Rng& rng, std::size_t n,
                                                std::size_t m, VectorNorm norm,
                                                int max_tries) {
  for (int t = 0; t < max_tries; ++t) {
    GraphInstance g = random_graph_instance(rng, n, m, norm);
    try {
      ModulusReport rep = lip_modulus(g.inst);
      if (rep.aubin && std::isfinite(rep.modulus)) return g.inst;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

NcLinearInstance random_nc_linear(Rng& rng, std::size_t n, std::size_t m,
                                  VectorNorm norm) {
  std::uniform_real_distribution<double> lam(0.2, 1.0);
  std::uniform_real_distribution<double> slack(0.1, 1.0);
  for (int attempt = 0; attempt < 500; ++attempt) {
    Matrix A = random_matrix(rng, m, n);
    IndexSet basis(n);
    for (std::size_t i = 0; i < n; ++i) basis[i] = static_cast<int>(i);
    Matrix A_B = A.select_rows(basis);
    LuFactors f = lu_factor(A_B);
    if (!f.nonsingular() || f.min_pivot / f.max_pivot < 0.05) continue;

    Vector x_bar = random_vector(rng, n);
    Vector lambda(n);
    for (double& v : lambda) v = lam(rng);
    Vector c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      Vector row = A.row(i);
      for (std::size_t j = 0; j < n; ++j) c[j] -= lambda[i] * row[j];
    }
    Vector b = A * x_bar;
    for (std::size_t i = n; i < m; ++i) b[i] += slack(rng);
    if (!slater_holds(A, b)) continue;
    try {
      NcLinearInstance out;
      out.inst = validate(n, m, Matrix(n, n), A, c, b, norm);
      out.basis = basis;
      QpSolution sol = solve(out.inst, nominal_point(out.inst));
      if (sol.status != QpStatus::Optimal || !*sol.unique) continue;
      // the vertex must be the solution
      Vector diff = *sol.x;
      for (std::size_t j = 0; j < n; ++j) diff[j] -= x_bar[j];
      if (norm_inf(diff) > 1e-7) continue;
      return out;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorCode::SolverFailure, "NC-linear generator exhausted retries");
}

RandomPolyhedron random_slater_polyhedron(Rng& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> slack(0.05, 1.0);
  RandomPolyhedron poly;
  poly.A = random_matrix(rng, m, n);
  Vector y0 = random_vector(rng, n);
  poly.b = poly.A * y0;
  for (double& v : poly.b) v += slack(rng);
  return poly;
}

// --- PGD + Dykstra oracle ---------------------------------------------------

namespace {

// Dykstra's alternating projection onto the intersection of halfspaces.
Vector dykstra_project(const Vector& y, const Matrix& A, const Vector& b,
                       std::size_t cycles) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  Vector x = y;
  std::vector<Vector> corr(m, Vector(n, 0.0));
  std::vector<double> row_sq(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += A(i, j) * A(i, j);
    row_sq[i] = s;
  }
  for (std::size_t cycle = 0; cycle < cycles; ++cycle) {
    double moved = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      Vector w = x;
      for (std::size_t j = 0; j < n; ++j) w[j] += corr[i][j];
      double viol = 0.0;
      for (std::size_t j = 0; j < n; ++j) viol += A(i, j) * w[j];
      viol -= b[i];
      Vector xi = w;
      if (viol > 0.0 && row_sq[i] > 0.0)
        for (std::size_t j = 0; j < n; ++j) xi[j] -= viol * A(i, j) / row_sq[i];
      for (std::size_t j = 0; j < n; ++j) {
        corr[i][j] = w[j] - xi[j];
        moved = std::max(moved, std::abs(xi[j] - x[j]));
      }
      x = xi;
    }
    if (moved < 1e-14) break;
  }
  return x;
}

}  // namespace

Vector pgd_solve(const QpInstance& inst, const ParamPoint& p,
                 std::size_t outer_iters) {
  SymEig eig = sym_eig(inst.Q);
  double L = std::max(eig.values.front(), 1e-12);
  double step = 1.0 / L;
  Vector x(inst.n, 0.0);
  x = dykstra_project(x, inst.A, p.b, 400);
  for (std::size_t it = 0; it < outer_iters; ++it) {
    Vector grad = inst.Q * x;
    for (std::size_t j = 0; j < inst.n; ++j) grad[j] += p.c[j];
    Vector y = x;
    for (std::size_t j = 0; j < inst.n; ++j) y[j] -= step * grad[j];
    Vector next = dykstra_project(y, inst.A, p.b, 120);
    double moved = 0.0;
    for (std::size_t j = 0; j < inst.n; ++j)
      moved = std::max(moved, std::abs(next[j] - x[j]));
    x = next;
    if (moved < 1e-13) break;
  }
  return x;
}

// --- exhaustive family oracle ------------------------------------------------

BruteFamilies brute_force_families(const QpInstance& inst, const ParamPoint& p,
                                   const Vector& x) {
  IndexSet active = active_indices(inst, p, x);
  Vector g = inst.Q * x;
  for (std::size_t j = 0; j < inst.n; ++j) g[j] = -(g[j] + p.c[j]);

  // every subset of the active set, no cardinality shortcut
  std::vector<IndexSet> members;
  const std::size_t k = active.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    IndexSet D;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1) D.push_back(active[i]);
    std::vector<Vector> gens;
    for (int i : D) gens.push_back(inst.constraint_row(static_cast<std::size_t>(i)));
    if (in_cone(g, gens)) members.push_back(D);
  }

  BruteFamilies fam;
  for (const IndexSet& D : members) {
    bool minimal = std::none_of(members.begin(), members.end(), [&](const IndexSet& S) {
      return S.size() < D.size() && std::includes(D.begin(), D.end(), S.begin(), S.end());
    });
    if (minimal) fam.minimal.push_back(D);
    bool independent = D.empty() || (D.size() <= inst.n &&
                                     kernel_basis(inst.A.select_rows(D).transposed()).empty());
    if (independent) fam.extended.push_back(D);
  }
  auto by_card_lex = [](const IndexSet& a, const IndexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  };
  std::sort(fam.minimal.begin(), fam.minimal.end(), by_card_lex);
  std::sort(fam.extended.begin(), fam.extended.end(), by_card_lex);
  return fam;
}

// --- operator-norm sampling oracle -------------------------------------------

Vector random_dual_ball(Rng& rng, std::size_t k, double r, VectorNorm nrm) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  Vector v(k, 0.0);
  if (k == 0) return v;
  switch (dual(nrm)) {
    case VectorNorm::LInf:
      for (double& x : v) x = r * sym(rng);
      return v;
    case VectorNorm::L2: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      double s = 0.0;
      for (double& x : v) {
        x = gauss(rng);
        s += x * x;
      }
      s = std::sqrt(s);
      if (s == 0.0) return Vector(k, 0.0);
      double rad = r * std::pow(unit(rng), 1.0 / static_cast<double>(k));
      for (double& x : v) x *= rad / s;
      return v;
    }
    case VectorNorm::L1: {
      std::exponential_distribution<double> expo(1.0);
      double sum = 0.0;
      for (double& x : v) {
        x = expo(rng);
        sum += x;
      }
      double rad = r * std::pow(unit(rng), 1.0 / static_cast<double>(k));
      for (double& x : v) x = (unit(rng) < 0.5 ? -1.0 : 1.0) * rad * x / sum;
      return v;
    }
  }
  return v;
}

double evaluate_operator(const Matrix& B, VectorNorm nrm, std::size_t d,
                         const Vector& alpha, const Vector& beta) {
  const std::size_t p = B.cols() - d;
  Vector w(B.rows(), 0.0);
  for (std::size_t i = 0; i < B.rows(); ++i) {
    for (std::size_t j = 0; j < p; ++j) w[i] += B(i, j) * alpha[j];
    for (std::size_t j = 0; j < d; ++j) w[i] += B(i, p + j) * beta[j];
  }
  return norm(w, nrm);
}

double sample_operator_norm(Rng& rng, const Matrix& B, VectorNorm nrm,
                            std::size_t d, std::size_t samples) {
  const std::size_t p = B.cols() - d;
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector alpha = random_dual_ball(rng, p, 1.0, nrm);
    Vector beta(d);
    for (double& x : beta) x = sym(rng);
    best = std::max(best, evaluate_operator(B, nrm, d, alpha, beta));
  }
  return best;
}

}  // namespace qtest
