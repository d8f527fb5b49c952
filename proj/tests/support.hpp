#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vfcsim/catalog.hpp"
#include "vfcsim/decision.hpp"
#include "vfcsim/delay.hpp"
#include "vfcsim/rng.hpp"
#include "vfcsim/scenario.hpp"

namespace vfcsim::test {

inline std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("vfcsim-" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline std::string write_file(const std::string& dir, const std::string& name,
                              const std::string& content) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

// Catalog with ids 1..n, single genre each, 100-byte contents.
inline ContentCatalog tiny_catalog(int n, std::int64_t size_bytes = 100) {
    std::vector<ContentItem> items;
    const char* genres[] = {"Action", "Drama", "Comedy", "Mystery"};
    for (int f = 1; f <= n; ++f) {
        items.push_back({f, "Movie " + std::to_string(f), {genres[f % 4]}});
    }
    return ContentCatalog(std::move(items), size_bytes);
}

inline PlatoonState tiny_platoon(int n, std::int64_t m_p = 1000, double spacing = 20.0) {
    PlatoonState p;
    p.n_vehicles = n;
    p.spacing_m = spacing;
    p.per_vehicle_capacity_bytes = m_p;
    for (int i = 0; i < n; ++i) p.positions_m.push_back(spacing * i);
    return p;
}

inline VfcState tiny_vfc(const std::vector<std::pair<double, std::int64_t>>& dist_cap) {
    VfcState v;
    v.round_index = 1;
    for (const auto& [d, cap] : dist_cap) {
        v.vehicles.push_back({v.next_vehicle_id++, d, cap});
    }
    std::sort(v.vehicles.begin(), v.vehicles.end(),
              [](const VfcVehicle& a, const VfcVehicle& b) {
                  return a.distance_to_leader_m < b.distance_to_leader_m;
              });
    return v;
}

inline RequestMatrix make_requests(const std::vector<std::pair<int, int>>& pairs) {
    RequestMatrix m;
    int user = 1000;
    for (const auto& p : pairs) {
        m.requesting_users[p].push_back(user++);
    }
    for (const auto& [key, users] : m.requesting_users) m.requests.push_back(key);
    std::sort(m.requests.begin(), m.requests.end());
    return m;
}

inline LinkParams default_links() { return LinkParams{}; }

// Small random round for property tests: platoon of 2..5 vehicles, 1..3 VFC
// vehicles, catalog sized to keep total slots feasible.
struct FuzzWorld {
    PlatoonState platoon;
    VfcState vfc;
    ContentCatalog catalog;
    CapacityPlan plan;
    DelayTables tables;
    RequestMatrix requests;
};

inline FuzzWorld fuzz_world(std::uint64_t seed, bool in_brute_guard) {
    Rng rng(derive_seed(seed, SeedStream::fuzz));
    FuzzWorld w;
    const std::int64_t s_bytes = 100;

    if (in_brute_guard) {
        const int n_platoon = 1 + static_cast<int>(rng.below(2));  // 1..2
        w.platoon = tiny_platoon(n_platoon, 100 + 100 * static_cast<std::int64_t>(rng.below(2)),
                                 10.0 + rng.uniform01() * 40.0);
        // keeps total slots <= 6 so instances stay inside the brute guard
        std::vector<std::pair<double, std::int64_t>> vfc;
        vfc.emplace_back(rng.uniform(1.0, 200.0), 100 + 100 * static_cast<std::int64_t>(rng.below(2)));
        w.vfc = tiny_vfc(vfc);
        w.catalog = tiny_catalog(6 + static_cast<int>(rng.below(3)), s_bytes);
    } else {
        const int n_platoon = 2 + static_cast<int>(rng.below(4));
        w.platoon = tiny_platoon(n_platoon, 100 * (1 + static_cast<std::int64_t>(rng.below(5))),
                                 10.0 + rng.uniform01() * 40.0);
        std::vector<std::pair<double, std::int64_t>> vfc;
        const int n_vfc = 1 + static_cast<int>(rng.below(3));
        for (int k = 0; k < n_vfc; ++k) {
            vfc.emplace_back(rng.uniform(1.0, 200.0), 600 + static_cast<std::int64_t>(rng.below(901)));
        }
        w.vfc = tiny_vfc(vfc);
        w.catalog = tiny_catalog(60 + static_cast<int>(rng.below(40)), s_bytes);
    }

    w.plan = capacity_slots(w.platoon, w.vfc, s_bytes);
    w.tables = build_delay_tables(w.platoon, w.vfc, default_links(), s_bytes, 1);

    const int n_requests = 1 + static_cast<int>(rng.below(in_brute_guard ? 4 : 8));
    for (int r = 0; r < n_requests; ++r) {
        const int vehicle = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(w.platoon.n_vehicles)));
        const int f = 1 + static_cast<int>(rng.below(w.catalog.size()));
        w.requests.requesting_users[{vehicle, f}].push_back(100 + r);
    }
    for (const auto& [key, users] : w.requests.requesting_users) w.requests.requests.push_back(key);
    std::sort(w.requests.requests.begin(), w.requests.requests.end());
    return w;
}

}  // namespace vfcsim::test
