#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "vfcsim/catalog.hpp"

namespace vfcsim {

struct PlatoonState {
    int n_vehicles = 0;
    double spacing_m = 20.0;
    double speed_kmh = 0.0;  // carried for provenance; does not enter delays
    std::int64_t per_vehicle_capacity_bytes = 0;
    std::vector<double> positions_m;  // index 0 = leader, strictly increasing gap order

    // 1-based vehicle indices
    double distance(int i, int j) const;
};

struct VfcVehicle {
    int vehicle_id = 0;
    double distance_to_leader_m = 0.0;
    std::int64_t capacity_bytes = 0;
};

struct VfcState {
    std::vector<VfcVehicle> vehicles;  // ascending distance_to_leader_m
    int round_index = 0;
    int next_vehicle_id = 1;  // arrival ids are persistent across rounds

    int size() const { return static_cast<int>(vehicles.size()); }
};

struct ScenarioConfig {
    int n_platoon = 10;
    double spacing_m = 20.0;
    double comm_radius_m = 200.0;
    double speed_kmh = 55.0;
    int k_max = 10;
    double lambda_v = 9.0;
    double mu_v = 8.0;
    // Birth-death rule: departures ~ Binomial(n, mu/(mu + n*count_norm)),
    // arrivals ~ Poisson(lambda * arrival_scale), result clamped to [1, k_max].
    double arrival_scale = 1.0;
    double count_norm = 1.0;
    std::int64_t m_p_bytes = 1000;
    std::int64_t m_min_bytes = 600;
    std::int64_t m_max_bytes = 1500;
    std::int64_t s_bytes = 100;
};

// Arrival scale giving long-run mean VFC size = target_mean for the rule
// above (ignoring the [1, k_max] clamp): solves lambda*scale =
// n*mu/(mu + n*count_norm) at n = target_mean.
double calibrate_arrival_scale(double target_mean, double lambda_v, double mu_v,
                               double count_norm);

std::pair<PlatoonState, VfcState> build_initial_state(const ScenarioConfig& cfg,
                                                      std::uint64_t seed);

// One inter-round membership step: sample departures, then arrivals, keep the
// count in [1, k_max], re-sort by distance. Surviving vehicles keep their
// capacity and distance.
VfcState advance_vfc(const VfcState& state, const ScenarioConfig& cfg, std::uint64_t seed);

struct RequestMatrix {
    // unique (vehicle index i, content id f) pairs, sorted
    std::vector<std::pair<int, int>> requests;
    // (i, f) -> users on vehicle i that drew f this round
    std::map<std::pair<int, int>, std::vector<int>> requesting_users;

    bool requested(int vehicle, int content_id) const;
};

// Every user draws one content uniformly from the distinct contents of their
// test split; per-vehicle duplicates collapse into a single (i, f) pair.
RequestMatrix sample_requests(const RatingLog& test_log, const VehicleAssignment& assignment,
                              const PlatoonState& platoon, std::uint64_t seed);

}  // namespace vfcsim
