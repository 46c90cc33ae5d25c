#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qlip/lp.hpp"
#include "support/testers.hpp"

using namespace qlip;

namespace {

Matrix rows(std::initializer_list<Vector> rs) {
  return Matrix::from_rows(std::vector<Vector>(rs));
}

}  // namespace

TEST_CASE("simple LP optimum at a vertex") {
  // min -x - y s.t. x <= 1, y <= 1, -x <= 0, -y <= 0
  Matrix G = rows({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  LpResult r = solve_lp(Vector{-1, -1}, G, Vector{1, 1, 0, 0});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK((*r.x)[0] == doctest::Approx(1.0));
  CHECK((*r.x)[1] == doctest::Approx(1.0));
  CHECK(*r.objective == doctest::Approx(-2.0));
}

TEST_CASE("infeasible LP detected") {
  Matrix G = rows({{1.0}, {-1.0}});
  LpResult r = solve_lp(Vector{0.0}, G, Vector{-1.0, -1.0});  // x <= -1, x >= 1
  CHECK(r.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded LP detected") {
  Matrix G = rows({{-1.0}});
  LpResult r = solve_lp(Vector{1.0}, G, Vector{0.0});  // min x, x >= 0? no: -x <= 0
  // min x subject to x >= 0 is bounded; flip the cost
  CHECK(r.status == LpStatus::Optimal);
  r = solve_lp(Vector{-1.0}, G, Vector{0.0});  // max x over x >= 0
  CHECK(r.status == LpStatus::Unbounded);
}

TEST_CASE("degenerate LP terminates under Bland's rule") {
  // Beale's classic cycling example (as inequalities plus sign constraints)
  Matrix G = rows({{0.25, -60, -0.04, 9},
                   {0.5, -90, -0.02, 3},
                   {0, 0, 1, 0},
                   {-1, 0, 0, 0},
                   {0, -1, 0, 0},
                   {0, 0, -1, 0},
                   {0, 0, 0, -1}});
  Vector h{0, 0, 1, 0, 0, 0, 0};
  Vector c{-0.75, 150, -0.02, 6};
  LpResult r = solve_lp(c, G, h);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(*r.objective == doctest::Approx(-0.05));
}

TEST_CASE("LP duality-style optimality on random feasible programs") {
  qtest::Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    Matrix G = qtest::random_matrix(rng, 5, 3);
    Vector x0 = qtest::random_vector(rng, 3);
    Vector h = G * x0;
    for (double& v : h) v += 0.3;
    // box the variables so the program is bounded
    Matrix Gb(5 + 6, 3);
    Vector hb(5 + 6);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 3; ++j) Gb(i, j) = G(i, j);
      hb[i] = h[i];
    }
    for (std::size_t j = 0; j < 3; ++j) {
      Gb(5 + 2 * j, j) = 1.0;
      hb[5 + 2 * j] = 10.0;
      Gb(5 + 2 * j + 1, j) = -1.0;
      hb[5 + 2 * j + 1] = 10.0;
    }
    Vector c = qtest::random_vector(rng, 3);
    LpResult r = solve_lp(c, Gb, hb);
    REQUIRE(r.status == LpStatus::Optimal);
    // optimal value is a lower bound at sampled feasible points
    for (int s = 0; s < 50; ++s) {
      Vector y = qtest::random_vector(rng, 3, -10.0, 10.0);
      Vector gy = Gb * y;
      bool feas = true;
      for (std::size_t i = 0; i < Gb.rows(); ++i) feas = feas && gy[i] <= hb[i] + 1e-12;
      if (feas) CHECK(dot(c, y) >= *r.objective - 1e-7);
    }
  }
}

TEST_CASE("slater_holds") {
  Matrix G = rows({{1.0}, {-1.0}});
  CHECK(slater_holds(G, Vector{1.0, 0.0}));         // 0 < x < 1 exists... (0,1) strict
  CHECK_FALSE(slater_holds(G, Vector{0.0, 0.0}));   // only x = 0
  CHECK_FALSE(slater_holds(G, Vector{-1.0, 0.0}));  // empty
}

TEST_CASE("zero_in_conv") {
  CHECK_FALSE(zero_in_conv({}));
  CHECK(zero_in_conv({Vector{1, 0}, Vector{-1, 0}}));
  CHECK_FALSE(zero_in_conv({Vector{1, 0}, Vector{0, 1}}));
  CHECK(zero_in_conv({Vector{0, 0}}));
}

TEST_CASE("in_cone returns a valid witness") {
  auto lambda = in_cone(Vector{1, 1}, {Vector{1, 0}, Vector{0, 1}});
  REQUIRE(lambda.has_value());
  CHECK((*lambda)[0] == doctest::Approx(1.0));
  CHECK((*lambda)[1] == doctest::Approx(1.0));

  CHECK_FALSE(in_cone(Vector{-1, 0}, {Vector{1, 0}, Vector{0, 1}}).has_value());

  // cone of the empty set is {0}
  CHECK(in_cone(Vector{0, 0}, {}).has_value());
  CHECK_FALSE(in_cone(Vector{1e-3, 0}, {}).has_value());
}

TEST_CASE("in_cone witnesses reconstruct the target on random cones") {
  qtest::Rng rng(41);
  int hits = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<Vector> gens;
    for (int k = 0; k < 4; ++k) gens.push_back(qtest::random_vector(rng, 3));
    Vector target = qtest::random_vector(rng, 3);
    auto lambda = in_cone(target, gens);
    if (!lambda) continue;
    ++hits;
    Vector recon(3, 0.0);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      CHECK((*lambda)[k] >= -1e-12);
      for (std::size_t j = 0; j < 3; ++j) recon[j] += (*lambda)[k] * gens[k][j];
    }
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(recon[j] == doctest::Approx(target[j]).epsilon(1e-8));
  }
  CHECK(hits > 10);
}

TEST_CASE("optimal_set_is_singleton") {
  // strictly convex: singleton
  QpInstance strict = validate(2, 1, Matrix::identity(2),
                               rows({{0.0, 1.0}}), Vector{0, 0}, Vector{1},
                               VectorNorm::L2);
  ParamPoint p = nominal_point(strict);
  CHECK(optimal_set_is_singleton(strict, p, Vector{0, 0}));

  // flat direction: min x1^2 s.t. x2 <= 0 has solution set {0} x (-inf, 0]
  Matrix Q(2, 2);
  Q(0, 0) = 1.0;
  QpInstance flat = validate(2, 1, Q, rows({{0.0, 1.0}}), Vector{0, 0}, Vector{0},
                             VectorNorm::L2);
  CHECK_FALSE(optimal_set_is_singleton(flat, nominal_point(flat), Vector{0, 0}));
}
