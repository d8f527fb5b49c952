#pragma once

#include "vfcsim/catalog.hpp"
#include "vfcsim/decision.hpp"
#include "vfcsim/delay.hpp"
#include "vfcsim/scenario.hpp"

namespace vfcsim {

// Exact minimizer of the round objective with full request knowledge,
// computed by reduction to a min-cost assignment: placing content f on node n
// costs the summed tier delay of f's requesters from n, leaving it on the
// cloud costs their summed RSU delays; unrequested contents fill leftover
// slots at zero marginal cost. Throws when the catalog cannot fill the slots.
CachingDecision clairvoyant_place(const RequestMatrix& requests, const CapacityPlan& plan,
                                  const DelayTables& tables, const ContentCatalog& catalog);

// Exhaustive enumeration of every valid decision; verification oracle for
// clairvoyant_place. Guarded to catalogs of at most 8 contents and at most 6
// total slots; ties broken by lexicographically smallest decision_to_list.
CachingDecision brute_force_place(const RequestMatrix& requests, const CapacityPlan& plan,
                                  const DelayTables& tables, const ContentCatalog& catalog);

}  // namespace vfcsim
