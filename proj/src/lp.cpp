#include "qlip/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlip/error.hpp"
#include "qlip/tol.hpp"

namespace qlip {

namespace {

constexpr double kPivotEps = 1e-11;

// Dense tableau simplex over nonnegative variables:
//   minimize c'y  s.t.  T y = rhs,  y >= 0,
// with an initial basis of slacks/artificials supplied by the caller.
// Bland's rule (smallest eligible index) on both entering and leaving
// variables precludes cycling.
struct Tableau {
  std::size_t rows, cols;         // constraint rows, structural+aux columns
  std::vector<Vector> t;          // rows x cols
  Vector rhs;                     // rows
  std::vector<int> basis;         // basic variable per row

  void pivot(std::size_t r, std::size_t col) {
    double p = t[r][col];
    for (std::size_t j = 0; j < cols; ++j) t[r][j] /= p;
    rhs[r] /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      double f = t[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[r][j];
      rhs[i] -= f * rhs[r];
    }
    basis[r] = static_cast<int>(col);
  }

  // Returns false when the objective is unbounded below.
  bool iterate(const Vector& cost, const std::vector<bool>& allowed) {
    const int max_iters = 200000;
    for (int it = 0; it < max_iters; ++it) {
      Vector dual(rows);
      for (std::size_t i = 0; i < rows; ++i)
        dual[i] = cost[static_cast<std::size_t>(basis[i])];
      int enter = -1;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allowed[j]) continue;
        double red = cost[j];
        for (std::size_t i = 0; i < rows; ++i) red -= dual[i] * t[i][j];
        if (red < -1e-9) {
          enter = static_cast<int>(j);
          break;  // Bland: smallest index
        }
      }
      if (enter < 0) return true;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows; ++i) {
        double a = t[i][static_cast<std::size_t>(enter)];
        if (a <= kPivotEps) continue;
        best_ratio = std::min(best_ratio, rhs[i] / a);
      }
      if (!std::isfinite(best_ratio)) return false;
      // Bland again: among minimal-ratio rows, leave the smallest basis index.
      int leave = -1;
      for (std::size_t i = 0; i < rows; ++i) {
        double a = t[i][static_cast<std::size_t>(enter)];
        if (a <= kPivotEps) continue;
        if (rhs[i] / a > best_ratio + 1e-12) continue;
        if (leave < 0 || basis[i] < basis[static_cast<std::size_t>(leave)])
          leave = static_cast<int>(i);
      }
      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
    }
    throw Error(ErrorCode::SolverFailure, "simplex iteration cap exceeded");
  }
};

}  // namespace

LpResult solve_lp(const Vector& c, const Matrix& G, const Vector& h) {
  const std::size_t n = c.size();
  const std::size_t m = G.rows();
  if ((m > 0 && G.cols() != n) || h.size() != m)
    throw Error(ErrorCode::DimensionMismatch, "LP data shapes disagree");

  // x = u - v with u, v >= 0; slack per row; artificial for rows whose
  // right-hand side is negative after sign normalization.
  const std::size_t n_struct = 2 * n + m;
  std::vector<int> art_col_of_row(m, -1);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (h[i] < 0.0) art_col_of_row[i] = static_cast<int>(n_struct + n_art++);
  const std::size_t cols = n_struct + n_art;

  Tableau tab;
  tab.rows = m;
  tab.cols = cols;
  tab.t.assign(m, Vector(cols, 0.0));
  tab.rhs.resize(m);
  tab.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sign = h[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      tab.t[i][j] = sign * G(i, j);
      tab.t[i][n + j] = -sign * G(i, j);
    }
    tab.t[i][2 * n + i] = sign;  // slack
    tab.rhs[i] = sign * h[i];
    if (art_col_of_row[i] >= 0) {
      tab.t[i][static_cast<std::size_t>(art_col_of_row[i])] = 1.0;
      tab.basis[i] = art_col_of_row[i];
    } else {
      tab.basis[i] = static_cast<int>(2 * n + i);
    }
  }

  std::vector<bool> allowed(cols, true);

  if (n_art > 0) {
    Vector phase1_cost(cols, 0.0);
    for (std::size_t j = n_struct; j < cols; ++j) phase1_cost[j] = 1.0;
    if (!tab.iterate(phase1_cost, allowed))
      throw Error(ErrorCode::SolverFailure, "phase-I reported unbounded");
    double art_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (tab.basis[i] >= static_cast<int>(n_struct)) art_sum += tab.rhs[i];
    if (art_sum > tol().feas) return LpResult{LpStatus::Infeasible, {}, {}};
    // Drive basic artificials out where possible; a row with no eligible
    // pivot is redundant and its artificial stays pinned at zero.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] < static_cast<int>(n_struct)) continue;
      for (std::size_t j = 0; j < n_struct; ++j) {
        if (std::abs(tab.t[i][j]) > 1e-8) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = n_struct; j < cols; ++j) allowed[j] = false;
  }

  Vector cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = c[j];
    cost[n + j] = -c[j];
  }
  if (!tab.iterate(cost, allowed)) return LpResult{LpStatus::Unbounded, {}, {}};

  Vector y(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    y[static_cast<std::size_t>(tab.basis[i])] = tab.rhs[i];
  Vector x(n);
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = y[j] - y[n + j];
    obj += c[j] * x[j];
  }
  return LpResult{LpStatus::Optimal, std::move(x), obj};
}

bool slater_holds(const Matrix& A, const Vector& b) {
  const std::size_t n = A.cols();
  const std::size_t m = A.rows();
  if (m == 0) return true;
  // maximize t s.t. a_i'y + t <= b_i, t <= 1
  Vector c(n + 1, 0.0);
  c[n] = -1.0;
  Matrix G(m + 1, n + 1);
  Vector h(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) G(i, j) = A(i, j);
    G(i, n) = 1.0;
    h[i] = b[i];
  }
  G(m, n) = 1.0;
  h[m] = 1.0;
  LpResult r = solve_lp(c, G, h);
  return r.status == LpStatus::Optimal && -*r.objective > tol().strict;
}

bool zero_in_conv(const std::vector<Vector>& generators) {
  if (generators.empty()) return false;
  const std::size_t k = generators.size();
  const std::size_t n = generators.front().size();
  // feasibility of sum l_i g_i = 0, sum l_i = 1, l >= 0 (equalities as pairs)
  Matrix G(2 * n + 2 + k, k);
  Vector h(2 * n + 2 + k, 0.0);
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t j = 0; j < k; ++j) {
      G(2 * row, j) = generators[j][row];
      G(2 * row + 1, j) = -generators[j][row];
    }
  for (std::size_t j = 0; j < k; ++j) {
    G(2 * n, j) = 1.0;
    G(2 * n + 1, j) = -1.0;
    G(2 * n + 2 + j, j) = -1.0;
  }
  h[2 * n] = 1.0;
  h[2 * n + 1] = -1.0;
  LpResult r = solve_lp(Vector(k, 0.0), G, h);
  return r.status == LpStatus::Optimal;
}

std::optional<Vector> in_cone(const Vector& v, const std::vector<Vector>& generators) {
  if (generators.empty()) {
    if (norm_inf(v) <= tol().feas) return Vector{};
    return std::nullopt;
  }
  const std::size_t k = generators.size();
  const std::size_t n = v.size();
  Matrix G(2 * n + k, k);
  Vector h(2 * n + k, 0.0);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j < k; ++j) {
      G(2 * row, j) = generators[j][row];
      G(2 * row + 1, j) = -generators[j][row];
    }
    h[2 * row] = v[row];
    h[2 * row + 1] = -v[row];
  }
  for (std::size_t j = 0; j < k; ++j) G(2 * n + j, j) = -1.0;
  LpResult r = solve_lp(Vector(k, 0.0), G, h);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  Vector lambda = *r.x;
  for (double& l : lambda) l = std::max(l, 0.0);
  return lambda;
}

bool optimal_set_is_singleton(const QpInstance& inst, const ParamPoint& p,
                              const Vector& x_star) {
  const std::size_t n = inst.n;
  const std::size_t m = inst.m;
  Vector qx = inst.Q * x_star;
  double cx = dot(p.c, x_star);

  Matrix G(m + 2 * n + 2, n);
  Vector h(m + 2 * n + 2);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) G(i, j) = inst.A(i, j);
    h[i] = p.b[i];
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      G(m + 2 * r, j) = inst.Q(r, j);
      G(m + 2 * r + 1, j) = -inst.Q(r, j);
    }
    h[m + 2 * r] = qx[r];
    h[m + 2 * r + 1] = -qx[r];
  }
  for (std::size_t j = 0; j < n; ++j) {
    G(m + 2 * n, j) = p.c[j];
    G(m + 2 * n + 1, j) = -p.c[j];
  }
  h[m + 2 * n] = cx;
  h[m + 2 * n + 1] = -cx;

  for (std::size_t j = 0; j < n; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector c(n, 0.0);
      c[j] = sign;  // minimizing sign*x_j extremizes coordinate j
      LpResult r = solve_lp(c, G, h);
      if (r.status == LpStatus::Unbounded) return false;
      if (r.status != LpStatus::Optimal)
        throw Error(ErrorCode::SolverFailure,
                    "optimal-set LP infeasible at a claimed optimum");
      if (std::abs(sign * *r.objective - x_star[j]) > 100.0 * tol().feas * (1.0 + std::abs(x_star[j])))
        return false;
    }
  }
  return true;
}

}  // namespace qlip
