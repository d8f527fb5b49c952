#include "vfcsim/prompt.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "vfcsim/rng.hpp"

namespace vfcsim {

namespace {

std::string join_genres(const std::vector<std::string>& genres) {
    std::string out;
    for (const std::string& g : genres) {
        if (!out.empty()) out += "|";
        out += g;
    }
    return out;
}

}  // namespace

HeterogeneousInfo collect_info(const PlatoonState& platoon, const VfcState& vfc,
                               const UserProfiles& profiles, const ContentCatalog& catalog,
                               const RatingLog& train, const VehicleAssignment& assignment,
                               std::int64_t s_bytes, int top_t) {
    HeterogeneousInfo info;

    std::vector<int> all_users;
    for (int v = 1; v <= assignment.n_vehicles(); ++v) {
        const auto& users = assignment.users_of_vehicle(v);
        if (users.empty()) {
            info.user_blocks.emplace_back(0, 0);
        } else {
            info.user_blocks.emplace_back(users.front(), users.back());
        }
        all_users.insert(all_users.end(), users.begin(), users.end());
    }
    std::sort(all_users.begin(), all_users.end());
    info.profiles.reserve(all_users.size());
    for (int u : all_users) info.profiles.push_back(profiles.at(u));

    info.history = train.entries;

    std::unordered_set<int> onboard(all_users.begin(), all_users.end());
    std::unordered_map<int, int> train_count;
    std::unordered_set<int> candidate;
    for (const Rating& r : train.entries) {
        ++train_count[r.content_id];
        if (onboard.count(r.user_id)) candidate.insert(r.content_id);
    }

    if (top_t > 0) {
        std::vector<std::pair<int, int>> by_count;
        by_count.reserve(train_count.size());
        for (const auto& [f, c] : train_count) by_count.emplace_back(f, c);
        std::sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        for (int k = 0; k < top_t && k < static_cast<int>(by_count.size()); ++k) {
            candidate.insert(by_count[static_cast<std::size_t>(k)].first);
        }
    } else {
        for (const ContentItem& item : catalog.items()) candidate.insert(item.content_id);
    }

    for (const ContentItem& item : catalog.items()) {
        if (candidate.count(item.content_id)) info.contents.push_back(&item);
    }

    info.cache_state.n_vehicles = platoon.n_vehicles;
    info.cache_state.m_p_bytes = platoon.per_vehicle_capacity_bytes;
    info.cache_state.platoon_total_bytes =
        platoon.per_vehicle_capacity_bytes * static_cast<std::int64_t>(platoon.n_vehicles);
    for (const VfcVehicle& v : vfc.vehicles) {
        info.cache_state.vfc_capacities_bytes.push_back(v.capacity_bytes);
    }
    info.cache_state.plan = capacity_slots(platoon, vfc, s_bytes);
    return info;
}

std::string PromptBundle::assembled() const {
    return "## Role\n" + role_text + "\n\n## Task\n" + task_text + "\n\n## Data\n" + info_text;
}

std::uint64_t PromptBundle::digest() const { return fnv1a(assembled()); }

PromptBundle build_prompt(const HeterogeneousInfo& info) {
    PromptBundle p;
    p.role_text =
        "You are an edge caching expert for a vehicular platoon network. You specialize in "
        "content request prediction and storage optimization across a three-tier "
        "platoon/VFC/cloud hierarchy; answer only with caching decisions.";

    const CacheStateInfo& cs = info.cache_state;
    const int total_slots = cs.plan.total();

    std::ostringstream task;
    task << "Task goal: Decide whether to cache movie f and where to cache it to maximize hit "
            "ratio and minimize transmission delay.\n";
    task << "Task definition: Select movies based on multi-dimensional information, without "
            "exceeding the cache capacity.\n";
    task << "System information description:\n";
    task << "- Cache capacities: Platoon (" << cs.platoon_total_bytes << " bytes = "
         << cs.n_vehicles << " vehicles x " << cs.m_p_bytes << " bytes), VFC (";
    for (std::size_t k = 0; k < cs.vfc_capacities_bytes.size(); ++k) {
        if (k) task << ", ";
        task << cs.vfc_capacities_bytes[k];
    }
    task << " bytes per vehicle).\n";
    task << "- User profiles: [id, age, gender, occupation] entries.\n";
    task << "- History: [user_id, movie_id, rating] entries.\n";
    task << "- Movie type: [movie_id, type] entries.\n";
    task << "Output type: A list of movie IDs representing the content placement sequence. "
            "Contents in the list are sequentially placed on the vehicles in the platoon, "
            "starting with the leader vehicle, until the cache capacities of all vehicles "
            "within the platoon are fully utilized. Remaining contents in the list are "
            "allocated to VFC vehicles in order of their increasing distance from the leader "
            "vehicle.\n";
    task << "Rules:\n";
    task << "- Platoon consists of " << cs.n_vehicles << " vehicles with the same cache capacity ("
         << cs.m_p_bytes << " bytes). VFC consists of personal vehicles within the communication "
            "range of the leader vehicle in the platoon.\n";
    task << "- A total of " << info.profiles.size()
         << " users are evenly distributed across the vehicles in the platoon. Movies more "
            "likely to be accessed by each user should be placed closer to the user's vehicle.";
    for (std::size_t v = 0; v < info.user_blocks.size(); ++v) {
        const auto& [lo, hi] = info.user_blocks[v];
        if (lo == 0) continue;
        if (v == 0) {
            task << " The leader vehicle serves users with IDs " << lo << " to " << hi << ",";
        } else if (v + 1 == info.user_blocks.size()) {
            task << " and vehicle " << v + 1 << " serves IDs " << lo << " to " << hi << ".";
        } else {
            task << " vehicle " << v + 1 << " serves IDs " << lo << " to " << hi << ",";
        }
    }
    task << "\n";
    task << "- Strict priority: Platoon > VFC (higher weights).\n";
    task << "- Capacity limit: The number of movie IDs does not exceed the system cache capacity ("
         << total_slots << " slots in total).\n";
    task << "- No duplicate movie IDs in the list.\n";
    task << "Respond with a single JSON array of movie IDs, best candidates first.";
    p.task_text = task.str();

    nlohmann::json caps;
    caps["platoon_total_bytes"] = cs.platoon_total_bytes;
    caps["platoon_vehicles"] = cs.n_vehicles;
    caps["m_p_bytes"] = cs.m_p_bytes;
    caps["platoon_slots"] = cs.plan.platoon_total();
    caps["vfc_capacities_bytes"] = cs.vfc_capacities_bytes;
    caps["vfc_slots"] = cs.plan.vfc_slots;
    caps["total_slots"] = total_slots;

    nlohmann::json profiles = nlohmann::json::array();
    for (const UserProfile& u : info.profiles) {
        profiles.push_back({u.user_id, to_string(u.age), to_string(u.gender),
                            occupation_name(u.occupation)});
    }
    nlohmann::json history = nlohmann::json::array();
    for (const Rating& r : info.history) {
        history.push_back({r.user_id, r.content_id, r.rating});
    }
    nlohmann::json types = nlohmann::json::array();
    for (const ContentItem* item : info.contents) {
        types.push_back({item->content_id, join_genres(item->genres)});
    }

    std::ostringstream data;
    data << "Cache capacities: " << caps.dump() << "\n";
    data << "User profiles: " << profiles.dump() << "\n";
    data << "History: " << history.dump() << "\n";
    data << "Movie types: " << types.dump();
    p.info_text = data.str();
    return p;
}

std::string render_id_list(const std::vector<int>& ids) {
    std::string out = "[";
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) out += ", ";
        out += std::to_string(ids[k]);
    }
    out += "]";
    return out;
}

std::optional<RankedList> parse_ranked_list(const std::string& text, std::string* error) {
    bool saw_non_integer = false;
    std::size_t pos = 0;
    while ((pos = text.find('[', pos)) != std::string::npos) {
        int depth = 0;
        std::size_t end = std::string::npos;
        for (std::size_t k = pos; k < text.size(); ++k) {
            if (text[k] == '[') ++depth;
            if (text[k] == ']' && --depth == 0) {
                end = k;
                break;
            }
        }
        if (end == std::string::npos) break;  // unbalanced; nothing further can close
        const std::string candidate = text.substr(pos, end - pos + 1);
        nlohmann::json j = nlohmann::json::parse(candidate, nullptr, false);
        if (j.is_array()) {
            bool all_int = true;
            for (const auto& e : j) {
                if (!e.is_number_integer() || e.get<std::int64_t>() > INT32_MAX ||
                    e.get<std::int64_t>() < INT32_MIN) {
                    all_int = false;
                    break;
                }
            }
            if (all_int) {
                RankedList list;
                list.ids.reserve(j.size());
                for (const auto& e : j) list.ids.push_back(e.get<int>());
                return list;
            }
            saw_non_integer = true;
        }
        pos += 1;
    }
    if (error) {
        *error = saw_non_integer ? "ranked list contains non-integer elements"
                                 : "no ranked list found in response";
    }
    return std::nullopt;
}

}  // namespace vfcsim
