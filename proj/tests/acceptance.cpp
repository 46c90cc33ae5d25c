// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qlip/error.hpp"
#include "qlip/families.hpp"
#include "qlip/io.hpp"
#include "qlip/lp.hpp"
#include "qlip/modulus.hpp"
#include "qlip/qp.hpp"
#include "qlip/verify.hpp"
#include "support/testers.hpp"

using namespace qlip;
using qtest::Rng;

namespace {

int g_failures = 0;

struct Criterion {
  std::string label;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void require_close(double got, double want, double tolr, const std::string& what) {
    bool ok = std::abs(got - want) <= tolr * std::max(1.0, std::abs(want));
    if (!ok)
      problems.push_back(what + " (got " + format_real(got) + ", want " +
                         format_real(want) + ")");
  }
};

void run(int number, const std::string& label,
         const std::function<void(Criterion&)>& body) {
  Criterion c;
  c.label = label;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  if (c.problems.empty()) {
    std::printf("PASS criterion %d: %s (%.2fs)\n", number, label.c_str(), secs);
  } else {
    ++g_failures;
    std::printf("FAIL criterion %d: %s (%.2fs)\n", number, label.c_str(), secs);
    for (const std::string& p : c.problems)
      std::printf("  - %s\n", p.c_str());
  }
  std::fflush(stdout);
}

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt101 = 10.04987562112089;

}  // namespace

int main() {
  run(1, "box-distance example end to end", [](Criterion& c) {
    ModulusReport rep = lip_modulus(load_instance(qtest::fixture("exa1.json")));
    c.require(rep.aubin, "aubin verdict");
    c.require_close(rep.modulus, kSqrt101, 1e-8, "modulus");
    bool found = false;
    for (const PerDEntry& e : rep.per_D)
      if (e.D == IndexSet{0}) {
        found = true;
        c.require_close(e.lip, kSqrt2, 1e-8, "per-D value for {1}");
      }
    c.require(found, "{1} present in per-D table");
    c.require(rep.attaining_D && *rep.attaining_D == IndexSet{0, 1},
              "attained at {1,2}");
  });

  run(2, "three-constraint family table and restricted modulus", [](Criterion& c) {
    struct Case {
      const char* file;
      double alpha;
    } cases[] = {{"exa2_alpha_1.json", 1.0},
                 {"exa2_alpha_1_3.json", 1.0 / 3.0},
                 {"exa2_alpha_2.json", 2.0}};
    for (const Case& k : cases) {
      QpInstance inst = load_instance(qtest::fixture(k.file));
      c.require_close(lip_SD(inst, IndexSet{0, 1}), 1.0, 1e-8,
                      std::string(k.file) + " lip S_{1,2}");
      c.require_close(lip_SD(inst, IndexSet{2}),
                      std::sqrt(1.0 + 1.0 / (k.alpha * k.alpha)), 1e-8,
                      std::string(k.file) + " lip S_{3}");
      c.require_close(lip_SD(inst, IndexSet{0, 2}), std::sqrt(5.0), 1e-8,
                      std::string(k.file) + " lip S_{1,3}");
      c.require_close(lip_SD(inst, IndexSet{1, 2}), std::sqrt(5.0), 1e-8,
                      std::string(k.file) + " lip S_{2,3}");
      double expected =
          std::sqrt(1.0 + std::pow(std::max(2.0, 1.0 / k.alpha), 2.0));
      ModulusReport rep = lip_modulus(inst);
      c.require_close(rep.modulus, expected, 1e-8,
                      std::string(k.file) + " lip_modulus");
    }
    QpInstance third = load_instance(qtest::fixture("exa2_alpha_1_3.json"));
    RestrictedModulus r = lip_modulus_restricted(third, IndexSet{0, 2});
    c.require_close(r.value, std::sqrt(10.0), 1e-8, "restricted modulus");
    c.require(r.attaining_D && *r.attaining_D == IndexSet{2},
              "restricted modulus attained at the proper subset {3}");
  });

  run(3, "half-line example: Aubin fails with the singularity pattern",
      [](Criterion& c) {
        QpInstance inst = load_instance(qtest::fixture("exa32.json"));
        ModulusReport rep = lip_modulus(inst);
        c.require(!rep.aubin, "aubin must fail");
        c.require(std::isinf(rep.modulus), "modulus must be inf");
        c.require(!md_nonsingular(inst, IndexSet{0}), "M_{1} singular");
        c.require(md_nonsingular(inst, IndexSet{0, 1}), "M_{1,2} nonsingular");
      });

  run(4, "projection closed form agrees with the generic path", [](Criterion& c) {
    QpInstance exa1 = load_instance(qtest::fixture("exa1.json"));
    ProjectionReport pr = lip_projection(exa1.A, exa1.b_bar, Vector{0.0, 0.0});
    c.require_close(pr.closed_form, pr.generic.modulus, 1e-8, "exa1 polyhedron");
    c.require_close(pr.closed_form, kSqrt101, 1e-8, "exa1 value");

    Rng rng(404);
    int done = 0, tries = 0;
    while (done < 50 && tries < 400) {
      ++tries;
      std::size_t n = 2 + static_cast<std::size_t>(tries % 2);
      std::size_t m = 3 + static_cast<std::size_t>(tries % 3);
      qtest::RandomPolyhedron poly = qtest::random_slater_polyhedron(rng, n, m);
      Vector z = qtest::random_vector(rng, n, -2.0, 2.0);
      try {
        ProjectionReport r = lip_projection(poly.A, poly.b, z);
        c.require_close(r.closed_form, r.generic.modulus, 1e-8,
                        "random polyhedron " + std::to_string(done));
        ++done;
      } catch (const Error&) {
        // degenerate draw; redraw
      }
    }
    c.require(done == 50, "50 random polyhedra analyzed");
  });

  run(5, "linear-case equivalence under the vertex condition", [](Criterion& c) {
    Rng rng(505);
    for (int t = 0; t < 50; ++t) {
      VectorNorm nrm = t % 3 == 0   ? VectorNorm::L1
                       : t % 3 == 1 ? VectorNorm::L2
                                    : VectorNorm::LInf;
      std::size_t n = 2 + static_cast<std::size_t>(t % 2);
      std::size_t m = n + 1 + static_cast<std::size_t>(t % 2);
      qtest::NcLinearInstance nc = qtest::random_nc_linear(rng, n, m, nrm);
      ModulusReport rep = lip_modulus(nc.inst);
      c.require(rep.families.nurnberger(n),
                "instance " + std::to_string(t) + " satisfies the vertex condition");
      LinearCaseNorms lcn = linear_case_norms(nc.inst, nc.basis);
      double scale = std::max(1.0, lcn.direct);
      c.require(std::abs(lcn.direct - lcn.dual_min) <= 1e-8 * scale &&
                    std::abs(lcn.direct - lcn.distance_form) <= 1e-8 * scale,
                "instance " + std::to_string(t) + " three expressions agree");
      // with a single minimal set, the modulus is that set's inverse norm
      double max_min = 0.0;
      for (const IndexSet& D : rep.families.minimal)
        max_min = std::max(max_min, linear_case_norms(nc.inst, D).direct);
      c.require(std::abs(rep.modulus - max_min) <= 1e-8 * scale,
                "instance " + std::to_string(t) + " modulus = max ||A_D^{-1}||");
    }
  });

  run(6, "perturbation oracle: soundness and sharpness", [](Criterion& c) {
    const std::vector<double> radii{1e-2, 1e-3, 1e-4};
    for (const char* name :
         {"exa1.json", "exa2_alpha_1.json", "exa2_alpha_1_3.json"}) {
      QpInstance inst = load_instance(qtest::fixture(name));
      ModulusReport rep = lip_modulus(inst);
      PerturbationTrace mc = estimate_modulus(inst, radii, 2000, 7);
      for (const PerturbationSample& s : mc.samples)
        if (s.ratio > rep.modulus + 1e-6) {
          c.require(false, std::string(name) + " sampled ratio exceeds formula");
          break;
        }
      const PerDEntry* attaining = nullptr;
      for (const PerDEntry& e : rep.per_D)
        if (rep.attaining_D && e.D == *rep.attaining_D) attaining = &e;
      c.require(attaining != nullptr, std::string(name) + " attaining entry");
      if (!attaining) continue;
      PerturbationTrace probe =
          directional_probe(inst, attaining->D, *attaining->attaining_direction,
                            radii);
      c.require(probe.samples.back().ratio >= 0.99 * rep.modulus,
                std::string(name) + " probe reaches 99% of the formula");
    }
  });

  run(7, "property suites against the independent oracles", [](Criterion& c) {
    Rng rng(707);
    // exhaustive-subset family oracle, m up to 6
    for (int t = 0; t < 40; ++t) {
      std::size_t m = 4 + static_cast<std::size_t>(t % 3);
      qtest::GraphInstance g = qtest::random_graph_instance(rng, 3, m);
      ParamPoint p = nominal_point(g.inst);
      QpSolution sol = solve(g.inst, p, /*compute_unique=*/false);
      if (sol.status != QpStatus::Optimal) {
        c.require(false, "family instance did not solve");
        continue;
      }
      IndexFamilies fam = compute_families(g.inst, p, *sol.x);
      qtest::BruteFamilies brute = qtest::brute_force_families(g.inst, p, *sol.x);
      c.require(fam.minimal == brute.minimal && fam.extended == brute.extended,
                "families match oracle on instance " + std::to_string(t));
    }
    // projected-gradient oracle
    for (int t = 0; t < 100; ++t) {
      std::size_t n = 2 + static_cast<std::size_t>(t % 2);
      std::size_t m = 3 + static_cast<std::size_t>(t % 3);
      QpInstance inst = qtest::random_strongly_convex(rng, n, m);
      ParamPoint p = nominal_point(inst);
      QpSolution sol = solve(inst, p, /*compute_unique=*/false);
      if (sol.status != QpStatus::Optimal) {
        c.require(false, "qp instance did not solve");
        continue;
      }
      double v = objective_value(inst, p.c, *sol.x);
      double v_oracle = objective_value(inst, p.c, qtest::pgd_solve(inst, p));
      c.require(std::abs(v - v_oracle) <= 1e-6 * (1.0 + std::abs(v_oracle)),
                "qp value matches oracle on instance " + std::to_string(t));
    }
    // operator-norm domination and attainment, 100 matrices x 1000 samples
    for (int t = 0; t < 100; ++t) {
      VectorNorm nrm = t % 3 == 0   ? VectorNorm::L1
                       : t % 3 == 1 ? VectorNorm::L2
                                    : VectorNorm::LInf;
      std::size_t n = 2 + static_cast<std::size_t>(t % 3);
      std::size_t d = static_cast<std::size_t>(t % 4);
      Matrix B = qtest::random_matrix(rng, n, n + d);
      OperatorNormResult r = operator_norm(B, nrm, d);
      double attained =
          qtest::evaluate_operator(B, nrm, d, r.alpha_star, r.beta_star);
      c.require(std::abs(attained - r.value) <= 1e-8 * std::max(1.0, r.value),
                "attaining direction reproduces the norm, matrix " +
                    std::to_string(t));
      c.require(qtest::sample_operator_norm(rng, B, nrm, d, 1000) <=
                    r.value + 1e-9,
                "sampled evaluations dominated, matrix " + std::to_string(t));
    }
  });

  run(8, "structural invariants", [](Criterion& c) {
    auto check = [&c](const QpInstance& inst, const std::string& tag) {
      ParamPoint p = nominal_point(inst);
      QpSolution sol = solve(inst, p, /*compute_unique=*/false);
      if (sol.status != QpStatus::Optimal) return;
      IndexFamilies fam;
      try {
        fam = compute_families(inst, p, *sol.x);
      } catch (const Error&) {
        return;  // not a graph point (numerically); nothing to check
      }
      for (const IndexSet& D : fam.minimal) {
        c.require(std::find(fam.extended.begin(), fam.extended.end(), D) !=
                      fam.extended.end(),
                  tag + ": minimal subset of extended");
        c.require(D.empty() ||
                      kernel_basis(inst.A.select_rows(D).transposed()).empty(),
                  tag + ": minimal generators independent");
      }
      for (const IndexSet& S : fam.extended) {
        if (!md_nonsingular(inst, S)) continue;  // also exercises the dual criterion
        for (const IndexSet& D : fam.extended)
          if (is_subset(S, D))
            c.require(md_nonsingular(inst, D),
                      tag + ": nonsingularity is inherited by supersets");
      }
    };

    for (const char* name : {"exa1.json", "exa2_alpha_1.json",
                             "exa2_alpha_1_3.json", "exa2_alpha_2.json",
                             "exa32.json", "triangle.json"})
      check(load_instance(qtest::fixture(name)), name);

    Rng rng(808);
    for (int t = 0; t < 200; ++t) {
      std::size_t n = 2 + static_cast<std::size_t>(t % 2);
      std::size_t m = 3 + static_cast<std::size_t>(t % 3);
      qtest::GraphInstance g = qtest::random_graph_instance(rng, n, m);
      check(g.inst, "random " + std::to_string(t));
    }
  });

  if (g_failures == 0) std::printf("all acceptance criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
