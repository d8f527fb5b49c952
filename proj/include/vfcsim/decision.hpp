#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "vfcsim/catalog.hpp"
#include "vfcsim/scenario.hpp"

namespace vfcsim {

struct RankedList {
    std::vector<int> ids;
};

struct CapacityPlan {
    std::vector<int> platoon_slots;  // index 0 = vehicle 1 (leader)
    std::vector<int> vfc_slots;      // index 0 = nearest VFC vehicle

    int total() const;
    int platoon_total() const;
};

// floor(M/s) per node
CapacityPlan capacity_slots(const PlatoonState& platoon, const VfcState& vfc,
                            std::int64_t s_bytes);

// Where a content lives. Exactly one tier per content once validated.
enum class Tier : std::uint8_t { platoon, vfc, cloud };

struct Placement {
    Tier tier = Tier::cloud;
    int node = 0;  // 1-based vehicle index (platoon) or VFC rank k (vfc); 0 for cloud
};

struct CachingDecision {
    std::vector<std::vector<int>> platoon;  // [vehicle-1] -> ordered content ids
    std::vector<std::vector<int>> vfc;      // [k-1] -> ordered content ids
    std::vector<int> cloud;                 // ascending content ids

    // content id -> placement for every id present in the decision
    std::unordered_map<int, Placement> placement_index() const;
};

struct Violation {
    std::string constraint;  // e.g. "exclusivity", "platoon-capacity"
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks exclusivity (each catalog content in exactly one tier), exact
// capacity fill, catalog membership, and duplicates.
ValidationReport validate(const CachingDecision& decision, const CapacityPlan& plan,
                          const ContentCatalog& catalog);

// Deterministic list-to-placement mapping: normalize the list (drop unknown
// ids and repeats), fill platoon vehicles leader-first, then VFC vehicles in
// ascending-distance order; extend from the fallback ranking when the list
// runs short; everything else goes to the cloud tier. Throws when the catalog
// cannot fill the slots.
CachingDecision map_list_to_decision(const RankedList& list, const CapacityPlan& plan,
                                     const ContentCatalog& catalog, const RankedList& fallback,
                                     bool* extended_with_fallback = nullptr);

// Concatenated cache contents, platoon (leader first) then VFC; inverse of
// map_list_to_decision over the same plan.
RankedList decision_to_list(const CachingDecision& decision);

nlohmann::json decision_to_json(const CachingDecision& decision);
std::uint64_t decision_digest(const CachingDecision& decision);

}  // namespace vfcsim
