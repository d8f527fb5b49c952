#include "vfcsim/decision.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "vfcsim/rng.hpp"

namespace vfcsim {

int CapacityPlan::total() const {
    return platoon_total() + std::accumulate(vfc_slots.begin(), vfc_slots.end(), 0);
}

int CapacityPlan::platoon_total() const {
    return std::accumulate(platoon_slots.begin(), platoon_slots.end(), 0);
}

CapacityPlan capacity_slots(const PlatoonState& platoon, const VfcState& vfc,
                            std::int64_t s_bytes) {
    if (s_bytes <= 0) throw std::invalid_argument("content size must be positive");
    CapacityPlan plan;
    plan.platoon_slots.assign(static_cast<std::size_t>(platoon.n_vehicles),
                              static_cast<int>(platoon.per_vehicle_capacity_bytes / s_bytes));
    plan.vfc_slots.reserve(vfc.vehicles.size());
    for (const VfcVehicle& v : vfc.vehicles) {
        plan.vfc_slots.push_back(static_cast<int>(v.capacity_bytes / s_bytes));
    }
    return plan;
}

std::unordered_map<int, Placement> CachingDecision::placement_index() const {
    std::unordered_map<int, Placement> index;
    for (std::size_t j = 0; j < platoon.size(); ++j) {
        for (int f : platoon[j]) index.emplace(f, Placement{Tier::platoon, static_cast<int>(j) + 1});
    }
    for (std::size_t k = 0; k < vfc.size(); ++k) {
        for (int f : vfc[k]) index.emplace(f, Placement{Tier::vfc, static_cast<int>(k) + 1});
    }
    for (int f : cloud) index.emplace(f, Placement{Tier::cloud, 0});
    return index;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (const Violation& v : violations) {
        os << v.constraint << ": " << v.detail << "\n";
    }
    return os.str();
}

namespace {

void check_node(const std::vector<int>& ids, Tier tier, int node, int expected_slots,
                const ContentCatalog& catalog, std::unordered_map<int, int>& seen_count,
                ValidationReport& report) {
    const char* tier_name = tier == Tier::platoon ? "platoon" : "vfc";
    if (static_cast<int>(ids.size()) != expected_slots) {
        report.violations.push_back(
            {std::string(tier_name) + "-capacity",
             std::string(tier_name) + "[" + std::to_string(node) + "] holds " +
                 std::to_string(ids.size()) + " contents, capacity requires exactly " +
                 std::to_string(expected_slots)});
    }
    for (int f : ids) {
        if (!catalog.contains(f)) {
            report.violations.push_back({"membership", "content " + std::to_string(f) +
                                                            " is not in the catalog"});
        }
        ++seen_count[f];
    }
}

}  // namespace

ValidationReport validate(const CachingDecision& decision, const CapacityPlan& plan,
                          const ContentCatalog& catalog) {
    ValidationReport report;
    if (decision.platoon.size() != plan.platoon_slots.size()) {
        report.violations.push_back({"shape", "decision covers " +
                                                  std::to_string(decision.platoon.size()) +
                                                  " platoon vehicles, state has " +
                                                  std::to_string(plan.platoon_slots.size())});
        return report;
    }
    if (decision.vfc.size() != plan.vfc_slots.size()) {
        report.violations.push_back({"shape", "decision covers " +
                                                  std::to_string(decision.vfc.size()) +
                                                  " VFC vehicles, state has " +
                                                  std::to_string(plan.vfc_slots.size())});
        return report;
    }

    std::unordered_map<int, int> seen_count;
    for (std::size_t j = 0; j < decision.platoon.size(); ++j) {
        check_node(decision.platoon[j], Tier::platoon, static_cast<int>(j) + 1,
                   plan.platoon_slots[j], catalog, seen_count, report);
    }
    for (std::size_t k = 0; k < decision.vfc.size(); ++k) {
        check_node(decision.vfc[k], Tier::vfc, static_cast<int>(k) + 1, plan.vfc_slots[k],
                   catalog, seen_count, report);
    }
    for (int f : decision.cloud) {
        if (!catalog.contains(f)) {
            report.violations.push_back(
                {"membership", "content " + std::to_string(f) + " is not in the catalog"});
        }
        ++seen_count[f];
    }

    for (const ContentItem& item : catalog.items()) {
        auto it = seen_count.find(item.content_id);
        const int n = it == seen_count.end() ? 0 : it->second;
        if (n == 0) {
            report.violations.push_back(
                {"exclusivity", "content " + std::to_string(item.content_id) +
                                    " is assigned to no tier"});
        } else if (n > 1) {
            report.violations.push_back(
                {"exclusivity", "content " + std::to_string(item.content_id) + " appears " +
                                    std::to_string(n) + " times across tiers"});
        }
    }
    return report;
}

CachingDecision map_list_to_decision(const RankedList& list, const CapacityPlan& plan,
                                     const ContentCatalog& catalog, const RankedList& fallback,
                                     bool* extended_with_fallback) {
    if (plan.platoon_slots.empty()) throw std::invalid_argument("no platoon vehicles");
    const int total_slots = plan.total();
    if (static_cast<int>(catalog.size()) < total_slots) {
        throw std::invalid_argument("catalog of " + std::to_string(catalog.size()) +
                                    " contents cannot fill " + std::to_string(total_slots) +
                                    " cache slots");
    }
    if (extended_with_fallback) *extended_with_fallback = false;

    // Normalization: unknown ids and repeats are dropped, first occurrence wins.
    std::vector<int> pool;
    std::unordered_set<int> placed;
    pool.reserve(static_cast<std::size_t>(total_slots));
    auto feed = [&](const std::vector<int>& ids) {
        for (int f : ids) {
            if (static_cast<int>(pool.size()) >= total_slots) return;
            if (!catalog.contains(f) || placed.count(f)) continue;
            placed.insert(f);
            pool.push_back(f);
        }
    };
    feed(list.ids);
    if (static_cast<int>(pool.size()) < total_slots) {
        if (extended_with_fallback) *extended_with_fallback = true;
        feed(fallback.ids);
    }
    if (static_cast<int>(pool.size()) < total_slots) {
        // Last resort: ascending catalog order keeps 12c/12d satisfiable even
        // with a short fallback.
        for (const ContentItem& item : catalog.items()) {
            if (static_cast<int>(pool.size()) >= total_slots) break;
            if (placed.count(item.content_id)) continue;
            placed.insert(item.content_id);
            pool.push_back(item.content_id);
        }
    }

    CachingDecision decision;
    std::size_t pos = 0;
    decision.platoon.resize(plan.platoon_slots.size());
    for (std::size_t j = 0; j < plan.platoon_slots.size(); ++j) {
        for (int s = 0; s < plan.platoon_slots[j]; ++s) decision.platoon[j].push_back(pool[pos++]);
    }
    decision.vfc.resize(plan.vfc_slots.size());
    for (std::size_t k = 0; k < plan.vfc_slots.size(); ++k) {
        for (int s = 0; s < plan.vfc_slots[k]; ++s) decision.vfc[k].push_back(pool[pos++]);
    }
    for (const ContentItem& item : catalog.items()) {
        if (!placed.count(item.content_id)) decision.cloud.push_back(item.content_id);
    }
    return decision;
}

RankedList decision_to_list(const CachingDecision& decision) {
    RankedList list;
    for (const auto& ids : decision.platoon) list.ids.insert(list.ids.end(), ids.begin(), ids.end());
    for (const auto& ids : decision.vfc) list.ids.insert(list.ids.end(), ids.begin(), ids.end());
    return list;
}

nlohmann::json decision_to_json(const CachingDecision& decision) {
    nlohmann::json j;
    j["platoon"] = decision.platoon;
    j["vfc"] = decision.vfc;
    j["cloud"] = decision.cloud;
    return j;
}

std::uint64_t decision_digest(const CachingDecision& decision) {
    const std::string s = decision_to_json(decision).dump();
    return fnv1a(s);
}

}  // namespace vfcsim
