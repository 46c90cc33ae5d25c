#pragma once

#include <cstdint>
#include <vector>

#include "qlip/indexset.hpp"
#include "qlip/model.hpp"
#include "qlip/modulus.hpp"

namespace qlip {

/// One re-solved perturbation pair and its displacement ratio.
struct PerturbationSample {
  ParamPoint p1;
  ParamPoint p2;
  Vector x2;
  double dist_to_S1 = 0.0;
  double ratio = 0.0;  // dist_to_S1 / param_distance, 0/0 := 0
};

struct PerturbationTrace {
  std::vector<PerturbationSample> samples;
  double best_ratio = 0.0;
  std::vector<double> radii;  // decreasing
};

/// Monte-Carlo lower-bound evidence: draws parameter pairs uniformly in the
/// r-ball around the nominal (dual-norm ball for c, sup-norm ball for b),
/// re-solves both programs, and records displacement ratios.  Deterministic
/// for a fixed seed.
PerturbationTrace estimate_modulus(const QpInstance& inst,
                                   const std::vector<double>& radii,
                                   std::size_t samples_per_radius,
                                   std::uint64_t seed);

/// Probes along the attaining direction of an index set D: the c-block moves
/// by -r alpha*, the b-rows in D by +r beta*, inactive rows are relaxed
/// outward just enough to stay inactive.  Ratios converge to lip S_D as the
/// radii shrink.
PerturbationTrace directional_probe(const QpInstance& inst, const IndexSet& D,
                                    const OperatorNormResult& direction,
                                    const std::vector<double>& radii);

}  // namespace qlip
