#include "qlip/families.hpp"

#include <algorithm>
#include <cmath>

#include "qlip/error.hpp"
#include "qlip/lp.hpp"
#include "qlip/qp.hpp"
#include "qlip/tol.hpp"

namespace qlip {

namespace {

Vector negative_gradient(const QpInstance& inst, const ParamPoint& p, const Vector& x) {
  Vector g = inst.Q * x;
  for (std::size_t j = 0; j < inst.n; ++j) g[j] = -(g[j] + p.c[j]);
  return g;
}

// Rank of the generator rows decided with the LU pivot tolerance; a rank
// decision within 10x of the threshold is flagged as degenerate.
bool generators_independent(const QpInstance& inst, const IndexSet& D,
                            std::vector<std::string>* warnings) {
  if (D.empty()) return true;
  if (D.size() > inst.n) return false;
  Matrix A_D = inst.A.select_rows(D);
  Matrix gram = A_D * A_D.transposed();  // d x d, singular iff rows dependent
  LuFactors f = lu_factor(gram);
  if (warnings && f.max_pivot > 0.0) {
    double ratio = f.min_pivot / f.max_pivot;
    if (ratio >= tol().pivot && ratio < 10.0 * tol().pivot)
      warnings->push_back("DEGENERATE_INSTANCE");
  }
  return kernel_basis(A_D.transposed()).empty();
}

void require_graph_point(const QpInstance& inst, const ParamPoint& p, const Vector& x) {
  KktCheck chk = verify_kkt(inst, p, x);
  if (!chk.certificate)
    throw Error(ErrorCode::NotAGraphPoint,
                "((c,b),x) is not in the graph of the argmin mapping");
}

}  // namespace

bool IndexFamilies::nurnberger(std::size_t n) const {
  return std::all_of(minimal.begin(), minimal.end(),
                     [n](const IndexSet& d) { return d.size() == n; });
}

IndexSet active_indices(const QpInstance& inst, const ParamPoint& p, const Vector& x) {
  Vector ax = inst.A * x;
  IndexSet active;
  for (std::size_t i = 0; i < inst.m; ++i) {
    double resid = ax[i] - p.b[i];
    if (resid > tol().feas * (1.0 + std::abs(p.b[i])))
      throw Error(ErrorCode::InfeasiblePoint, "x violates a constraint");
    if (std::abs(resid) <= tol().act * (1.0 + std::abs(p.b[i])))
      active.push_back(static_cast<int>(i));
  }
  return active;
}

IndexFamilies compute_families(const QpInstance& inst, const ParamPoint& p,
                               const Vector& x) {
  require_graph_point(inst, p, x);
  IndexFamilies fam;
  fam.active = active_indices(inst, p, x);
  Vector g = negative_gradient(inst, p, x);

  // Caratheodory bounds every cone representation by an independent subset,
  // so |D| <= n suffices for both families.
  std::vector<IndexSet> members;  // cone condition only
  for (const IndexSet& D : subsets_by_cardinality(fam.active, inst.n)) {
    std::vector<Vector> gens;
    for (int i : D) gens.push_back(inst.constraint_row(static_cast<std::size_t>(i)));
    if (in_cone(g, gens)) members.push_back(D);
  }

  for (const IndexSet& D : members) {
    bool minimal = std::none_of(members.begin(), members.end(),
                                [&](const IndexSet& S) { return is_proper_subset(S, D); });
    if (minimal) fam.minimal.push_back(D);
    if (generators_independent(inst, D, &fam.warnings)) fam.extended.push_back(D);
  }
  std::sort(fam.warnings.begin(), fam.warnings.end());
  fam.warnings.erase(std::unique(fam.warnings.begin(), fam.warnings.end()),
                     fam.warnings.end());
  return fam;
}

std::vector<IndexSet> minimal_kkt_family(const QpInstance& inst, const ParamPoint& p,
                                         const Vector& x) {
  return compute_families(inst, p, x).minimal;
}

std::vector<IndexSet> extended_kkt_family(const QpInstance& inst, const ParamPoint& p,
                                          const Vector& x) {
  return compute_families(inst, p, x).extended;
}

}  // namespace qlip
