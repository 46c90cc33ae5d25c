#pragma once

#include <string>
#include <vector>

#include "qlip/indexset.hpp"
#include "qlip/model.hpp"

namespace qlip {

/// Active indices, minimal KKT family M and extended family L at a graph
/// point ((c,b), x).
struct IndexFamilies {
  IndexSet active;
  std::vector<IndexSet> minimal;
  std::vector<IndexSet> extended;
  std::vector<std::string> warnings;

  /// All minimal sets have cardinality n (sufficient for Aubin; equivalent
  /// in the linear case).
  bool nurnberger(std::size_t n) const;
};

IndexSet active_indices(const QpInstance& inst, const ParamPoint& p, const Vector& x);

std::vector<IndexSet> minimal_kkt_family(const QpInstance& inst, const ParamPoint& p,
                                         const Vector& x);

std::vector<IndexSet> extended_kkt_family(const QpInstance& inst, const ParamPoint& p,
                                          const Vector& x);

/// One pass computing all three members (and degeneracy warnings).
IndexFamilies compute_families(const QpInstance& inst, const ParamPoint& p,
                               const Vector& x);

}  // namespace qlip
