#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vfcsim/catalog.hpp"
#include "vfcsim/decision.hpp"
#include "vfcsim/scenario.hpp"

namespace vfcsim {

struct CacheStateInfo {
    std::int64_t platoon_total_bytes = 0;  // M_p * N
    int n_vehicles = 0;
    std::int64_t m_p_bytes = 0;
    std::vector<std::int64_t> vfc_capacities_bytes;  // ascending distance
    CapacityPlan plan;
};

// The per-round information bundle rendered into the prompt: profiles,
// train-split ratings, content types for the candidate set, cache state.
struct HeterogeneousInfo {
    std::vector<UserProfile> profiles;                  // ascending user id
    std::vector<Rating> history;                        // train split only
    std::vector<const ContentItem*> contents;           // candidate set, ascending id
    CacheStateInfo cache_state;
    std::vector<std::pair<int, int>> user_blocks;       // per vehicle: [first_id, last_id]
};

// Candidate contents = top_t most-rated in train plus everything an onboard
// user has rated; top_t <= 0 keeps the whole catalog.
HeterogeneousInfo collect_info(const PlatoonState& platoon, const VfcState& vfc,
                               const UserProfiles& profiles, const ContentCatalog& catalog,
                               const RatingLog& train, const VehicleAssignment& assignment,
                               std::int64_t s_bytes, int top_t);

struct PromptBundle {
    std::string role_text;
    std::string task_text;
    std::string info_text;

    std::string assembled() const;
    std::uint64_t digest() const;
};

PromptBundle build_prompt(const HeterogeneousInfo& info);

// Extracts the first well-formed integer array (bare or fenced) from free
// text; order preserved, duplicates kept. Returns nullopt with a message on
// failure.
std::optional<RankedList> parse_ranked_list(const std::string& text, std::string* error = nullptr);

// The exact rendering used for id lists in prompts and mock responses.
std::string render_id_list(const std::vector<int>& ids);

}  // namespace vfcsim
