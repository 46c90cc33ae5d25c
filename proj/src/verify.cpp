#include "qlip/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qlip/error.hpp"
#include "qlip/lp.hpp"
#include "qlip/qp.hpp"
#include "qlip/tol.hpp"

namespace qlip {

namespace {

using Rng = std::mt19937_64;

// Uniform draw from the radius-r ball of the dual norm of var_norm.
Vector sample_dual_ball(Rng& rng, std::size_t k, double r, VectorNorm var_norm) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  Vector v(k, 0.0);
  if (k == 0) return v;
  switch (dual(var_norm)) {
    case VectorNorm::LInf:
      for (double& x : v) x = r * sym(rng);
      return v;
    case VectorNorm::L2: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      double nrm = 0.0;
      for (double& x : v) {
        x = gauss(rng);
        nrm += x * x;
      }
      nrm = std::sqrt(nrm);
      if (nrm == 0.0) return Vector(k, 0.0);
      double rad = r * std::pow(unit(rng), 1.0 / static_cast<double>(k));
      for (double& x : v) x *= rad / nrm;
      return v;
    }
    case VectorNorm::L1: {
      // uniform on the cross-polytope: simplex weights, random signs,
      // radius from the volume-correct power law
      std::exponential_distribution<double> expo(1.0);
      double sum = 0.0;
      for (double& x : v) {
        x = expo(rng);
        sum += x;
      }
      double rad = r * std::pow(unit(rng), 1.0 / static_cast<double>(k));
      for (double& x : v) {
        double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        x = sign * rad * x / sum;
      }
      return v;
    }
  }
  return v;
}

Vector sample_box(Rng& rng, std::size_t k, double r) {
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  Vector v(k);
  for (double& x : v) x = r * sym(rng);
  return v;
}

Vector solve_or_throw(const QpInstance& inst, const ParamPoint& p,
                      const ParamPoint& other) {
  QpSolution sol = solve(inst, p, /*compute_unique=*/false);
  if (sol.status != QpStatus::Optimal) {
    std::ostringstream msg;
    msg << "perturbed program did not solve; c = [";
    for (std::size_t j = 0; j < p.c.size(); ++j)
      msg << (j ? ", " : "") << p.c[j];
    msg << "], b = [";
    for (std::size_t i = 0; i < p.b.size(); ++i)
      msg << (i ? ", " : "") << p.b[i];
    msg << "] (paired with b' = [";
    for (std::size_t i = 0; i < other.b.size(); ++i)
      msg << (i ? ", " : "") << other.b[i];
    msg << "])";
    throw Error(ErrorCode::SolverFailure, msg.str());
  }
  return *sol.x;
}

PerturbationSample make_sample(const QpInstance& inst, ParamPoint p1,
                               ParamPoint p2) {
  Vector x1 = solve_or_throw(inst, p1, p2);
  Vector x2 = solve_or_throw(inst, p2, p1);
  PerturbationSample s;
  s.p1 = std::move(p1);
  s.p2 = std::move(p2);
  Vector diff(x2.size());
  for (std::size_t j = 0; j < x2.size(); ++j) diff[j] = x2[j] - x1[j];
  s.x2 = std::move(x2);
  s.dist_to_S1 = norm(diff, inst.var_norm);
  double denom = param_distance(s.p1, s.p2, inst);
  s.ratio = denom > 0.0 ? s.dist_to_S1 / denom : 0.0;  // 0/0 := 0
  return s;
}

}  // namespace

PerturbationTrace estimate_modulus(const QpInstance& inst,
                                   const std::vector<double>& radii,
                                   std::size_t samples_per_radius,
                                   std::uint64_t seed) {
  Rng rng(seed);
  PerturbationTrace trace;
  trace.radii = radii;
  std::sort(trace.radii.begin(), trace.radii.end(), std::greater<double>());
  for (double r : trace.radii) {
    for (std::size_t s = 0; s < samples_per_radius; ++s) {
      ParamPoint p1, p2;
      p1.c = inst.c_bar;
      p2.c = inst.c_bar;
      Vector dc1 = sample_dual_ball(rng, inst.n, r, inst.var_norm);
      Vector dc2 = sample_dual_ball(rng, inst.n, r, inst.var_norm);
      for (std::size_t j = 0; j < inst.n; ++j) {
        p1.c[j] += dc1[j];
        p2.c[j] += dc2[j];
      }
      Vector db1 = sample_box(rng, inst.m, r);
      Vector db2 = sample_box(rng, inst.m, r);
      p1.b = inst.b_bar;
      p2.b = inst.b_bar;
      for (std::size_t i = 0; i < inst.m; ++i) {
        p1.b[i] += db1[i];
        p2.b[i] += db2[i];
      }
      trace.samples.push_back(make_sample(inst, std::move(p1), std::move(p2)));
      trace.best_ratio = std::max(trace.best_ratio, trace.samples.back().ratio);
    }
  }
  return trace;
}

PerturbationTrace directional_probe(const QpInstance& inst, const IndexSet& D,
                                    const OperatorNormResult& direction,
                                    const std::vector<double>& radii) {
  if (direction.alpha_star.size() != inst.n ||
      direction.beta_star.size() != D.size())
    throw Error(ErrorCode::DimensionMismatch,
                "direction blocks must have sizes n and |D|");
  ParamPoint nominal = nominal_point(inst);
  QpSolution sol = solve(inst, nominal, /*compute_unique=*/false);
  if (sol.status != QpStatus::Optimal)
    throw Error(ErrorCode::SolverFailure, "nominal program did not solve");
  const Vector& x_bar = *sol.x;

  // multipliers of -(Q x_bar + c_bar) over the generators of D
  Vector g = inst.Q * x_bar;
  for (std::size_t j = 0; j < inst.n; ++j) g[j] = -(g[j] + inst.c_bar[j]);
  std::vector<Vector> gens;
  for (int i : D) gens.push_back(inst.constraint_row(static_cast<std::size_t>(i)));
  auto lambda = in_cone(g, gens);
  if (!lambda)
    throw Error(ErrorCode::D0NotInFamily, "D does not generate the gradient");

  BorderedKkt bk = assemble_MD(inst, D);
  LuFactors f = lu_factor(bk.M);
  if (!f.nonsingular())
    throw Error(ErrorCode::SolverFailure, "M_D is singular along the probe");

  PerturbationTrace trace;
  trace.radii = radii;
  std::sort(trace.radii.begin(), trace.radii.end(), std::greater<double>());

  const std::size_t d = D.size();
  for (double r : trace.radii) {
    // A sqrt(r) shift of c along the zero-multiplier generators makes every
    // multiplier of D strictly positive at order sqrt(r) >> r, so the
    // order-r move that follows cannot drive any of them negative.
    const double delta = std::sqrt(std::max(r, 0.0));
    ParamPoint p1;
    p1.c = inst.c_bar;
    for (std::size_t k = 0; k < d; ++k) {
      if ((*lambda)[k] > tol().feas) continue;
      Vector row = inst.constraint_row(static_cast<std::size_t>(D[k]));
      for (std::size_t j = 0; j < inst.n; ++j) p1.c[j] -= delta * row[j];
    }

    // Predicted displacement of the stationary point for the order-r move.
    Vector rhs(inst.n + d, 0.0);
    for (std::size_t j = 0; j < inst.n; ++j)
      rhs[j] = r * direction.alpha_star[j];
    for (std::size_t k = 0; k < d; ++k)
      rhs[inst.n + k] = r * direction.beta_star[k];
    Vector w = f.solve(rhs);
    Vector x_pred = x_bar;
    for (std::size_t j = 0; j < inst.n; ++j) x_pred[j] += w[j];

    ParamPoint p2 = p1;
    for (std::size_t j = 0; j < inst.n; ++j)
      p2.c[j] -= r * direction.alpha_star[j];

    // Rows outside D are relaxed just enough to stay satisfied at both the
    // nominal and the predicted point; rows in D move by +r beta*.
    p1.b = inst.b_bar;
    p2.b = inst.b_bar;
    Vector ax_bar = inst.A * x_bar;
    Vector ax_pred = inst.A * x_pred;
    for (std::size_t i = 0; i < inst.m; ++i) {
      if (std::find(D.begin(), D.end(), static_cast<int>(i)) != D.end()) continue;
      double slackless = std::max({0.0, ax_bar[i] - inst.b_bar[i],
                                   ax_pred[i] - inst.b_bar[i]});
      p1.b[i] += slackless;
      p2.b[i] += slackless;
    }
    for (std::size_t k = 0; k < d; ++k)
      p2.b[static_cast<std::size_t>(D[k])] += r * direction.beta_star[k];

    trace.samples.push_back(make_sample(inst, std::move(p1), std::move(p2)));
    trace.best_ratio = std::max(trace.best_ratio, trace.samples.back().ratio);
  }
  return trace;
}

}  // namespace qlip
