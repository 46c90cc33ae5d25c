#pragma once

#include <cstdlib>

namespace qlip {

// All thresholds live here so the QLIP_TOLERANCE_SCALE override applies
// uniformly.  Values are chosen for double precision at desk scale.
struct Tolerances {
  double pivot  = 1e-10;  // relative LU pivot ratio below which a matrix is singular
  double resid  = 1e-9;   // linear-solve residual bound
  double sym    = 1e-9;   // allowed asymmetry before symmetrization fails
  double eig    = 1e-8;   // eigendecomposition reconstruction bound
  double psd    = 1e-9;   // relative negative-eigenvalue slack for PSD checks
  double feas   = 1e-9;   // LP/QP feasibility slack
  double strict = 1e-9;   // Slater strictness margin
  double act    = 1e-9;   // active-constraint detection (relative)
  double norm   = 1e-8;   // operator-norm agreement bound
};

inline const Tolerances& tol() {
  static const Tolerances t = [] {
    Tolerances base;
    if (const char* env = std::getenv("QLIP_TOLERANCE_SCALE")) {
      double s = std::atof(env);
      if (s > 0.0) {
        base.pivot *= s;
        base.resid *= s;
        base.sym *= s;
        base.eig *= s;
        base.psd *= s;
        base.feas *= s;
        base.strict *= s;
        base.act *= s;
        base.norm *= s;
      }
    }
    return base;
  }();
  return t;
}

}  // namespace qlip
