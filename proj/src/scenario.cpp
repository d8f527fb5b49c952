#include "vfcsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vfcsim/rng.hpp"

namespace vfcsim {

namespace {

void sort_by_distance(std::vector<VfcVehicle>& v) {
    std::sort(v.begin(), v.end(), [](const VfcVehicle& a, const VfcVehicle& b) {
        if (a.distance_to_leader_m != b.distance_to_leader_m) {
            return a.distance_to_leader_m < b.distance_to_leader_m;
        }
        return a.vehicle_id < b.vehicle_id;
    });
}

VfcVehicle draw_vehicle(int id, const ScenarioConfig& cfg, Rng& rng) {
    VfcVehicle v;
    v.vehicle_id = id;
    v.distance_to_leader_m = rng.uniform(0.0, cfg.comm_radius_m);
    if (v.distance_to_leader_m <= 0.0) v.distance_to_leader_m = cfg.comm_radius_m;  // (0, radius]
    v.capacity_bytes = cfg.m_min_bytes +
                       static_cast<std::int64_t>(rng.below(
                           static_cast<std::uint64_t>(cfg.m_max_bytes - cfg.m_min_bytes + 1)));
    return v;
}

}  // namespace

double PlatoonState::distance(int i, int j) const {
    if (i < 1 || i > n_vehicles || j < 1 || j > n_vehicles) {
        throw std::out_of_range("platoon vehicle index out of range");
    }
    return std::abs(positions_m[static_cast<std::size_t>(i - 1)] -
                    positions_m[static_cast<std::size_t>(j - 1)]);
}

double calibrate_arrival_scale(double target_mean, double lambda_v, double mu_v,
                               double count_norm) {
    if (target_mean <= 0.0 || lambda_v <= 0.0 || mu_v <= 0.0) {
        throw std::invalid_argument("calibration requires positive target, lambda and mu");
    }
    return target_mean * mu_v / (lambda_v * (mu_v + target_mean * count_norm));
}

std::pair<PlatoonState, VfcState> build_initial_state(const ScenarioConfig& cfg,
                                                      std::uint64_t seed) {
    if (cfg.n_platoon < 1) throw std::invalid_argument("platoon needs at least one vehicle");
    if (cfg.k_max < 1) throw std::invalid_argument("K must be >= 1");
    if (cfg.m_min_bytes > cfg.m_max_bytes) throw std::invalid_argument("M_min exceeds M_max");
    if (cfg.m_p_bytes < 0) throw std::invalid_argument("platoon capacity must be non-negative");

    PlatoonState platoon;
    platoon.n_vehicles = cfg.n_platoon;
    platoon.spacing_m = cfg.spacing_m;
    platoon.speed_kmh = cfg.speed_kmh;
    platoon.per_vehicle_capacity_bytes = cfg.m_p_bytes;
    platoon.positions_m.resize(static_cast<std::size_t>(cfg.n_platoon));
    for (int i = 0; i < cfg.n_platoon; ++i) {
        platoon.positions_m[static_cast<std::size_t>(i)] = cfg.spacing_m * i;
    }

    Rng rng(derive_seed(seed, SeedStream::vfc_init));
    VfcState vfc;
    vfc.round_index = 1;
    const int initial = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.k_max)));
    for (int k = 0; k < initial; ++k) {
        vfc.vehicles.push_back(draw_vehicle(vfc.next_vehicle_id++, cfg, rng));
    }
    sort_by_distance(vfc.vehicles);
    return {std::move(platoon), std::move(vfc)};
}

VfcState advance_vfc(const VfcState& state, const ScenarioConfig& cfg, std::uint64_t seed) {
    Rng rng(derive_seed(seed, SeedStream::vfc_round, static_cast<std::uint64_t>(state.round_index)));

    VfcState next;
    next.round_index = state.round_index + 1;
    next.next_vehicle_id = state.next_vehicle_id;

    const int n = state.size();
    const double p_leave =
        cfg.mu_v <= 0.0 ? 0.0 : cfg.mu_v / (cfg.mu_v + static_cast<double>(n) * cfg.count_norm);
    int departures = rng.binomial(n, p_leave);

    const double arrival_mean = cfg.lambda_v * cfg.arrival_scale;
    int arrivals = arrival_mean > 0.0 ? rng.poisson(arrival_mean) : 0;

    // An empty VFC is not allowed: when every vehicle would depart and nobody
    // arrives, one survivor is retained.
    if (departures >= n && arrivals == 0) departures = n - 1;

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    rng.shuffle(order);
    std::vector<char> leaves(static_cast<std::size_t>(n), 0);
    for (int d = 0; d < departures; ++d) leaves[order[static_cast<std::size_t>(d)]] = 1;
    for (int k = 0; k < n; ++k) {
        if (!leaves[static_cast<std::size_t>(k)]) {
            next.vehicles.push_back(state.vehicles[static_cast<std::size_t>(k)]);
        }
    }

    // Admit arrivals only while capacity K allows.
    for (int a = 0; a < arrivals && next.size() < cfg.k_max; ++a) {
        next.vehicles.push_back(draw_vehicle(next.next_vehicle_id++, cfg, rng));
    }

    sort_by_distance(next.vehicles);
    return next;
}

bool RequestMatrix::requested(int vehicle, int content_id) const {
    return std::binary_search(requests.begin(), requests.end(),
                              std::make_pair(vehicle, content_id));
}

RequestMatrix sample_requests(const RatingLog& test_log, const VehicleAssignment& assignment,
                              const PlatoonState& platoon, std::uint64_t seed) {
    // Distinct test contents per user, in first-seen order.
    std::unordered_map<int, std::vector<int>> choices;
    for (const Rating& r : test_log.entries) {
        auto& v = choices[r.user_id];
        if (std::find(v.begin(), v.end(), r.content_id) == v.end()) v.push_back(r.content_id);
    }

    RequestMatrix out;
    for (int vehicle = 1; vehicle <= platoon.n_vehicles; ++vehicle) {
        for (int user : assignment.users_of_vehicle(vehicle)) {
            auto it = choices.find(user);
            if (it == choices.end() || it->second.empty()) continue;  // no held-out ratings
            Rng rng(derive_seed(seed, SeedStream::requests, static_cast<std::uint64_t>(user)));
            const int f = it->second[rng.below(it->second.size())];
            out.requesting_users[{vehicle, f}].push_back(user);
        }
    }
    for (const auto& [key, users] : out.requesting_users) out.requests.push_back(key);
    std::sort(out.requests.begin(), out.requests.end());
    return out;
}

}  // namespace vfcsim
