#include "vfcsim/delay.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace vfcsim {

double DelayTables::platoon_rate(int i, int j) const {
    if (i < 1 || i > n_vehicles || j < 1 || j > n_vehicles) {
        throw std::out_of_range("platoon index out of range: (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
    }
    return platoon_rate_bps[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_vehicles) +
                            static_cast<std::size_t>(j - 1)];
}

double DelayTables::vfc_rate(int k) const {
    if (k < 1 || k > static_cast<int>(vfc_rate_bps.size())) {
        throw std::out_of_range("VFC index out of range: " + std::to_string(k));
    }
    return vfc_rate_bps[static_cast<std::size_t>(k - 1)];
}

DelayTables build_delay_tables(const PlatoonState& platoon, const VfcState& vfc,
                               const LinkParams& params, std::int64_t s_bytes, int round) {
    DelayTables t;
    t.n_vehicles = platoon.n_vehicles;
    t.content_bits = 8.0 * static_cast<double>(s_bytes);
    t.backhaul_rate_bps = params.r_rc_bps;

    const std::size_t n = static_cast<std::size_t>(platoon.n_vehicles);
    t.platoon_rate_bps.assign(n * n, 0.0);
    for (int i = 1; i <= platoon.n_vehicles; ++i) {
        for (int j = 1; j <= platoon.n_vehicles; ++j) {
            if (i == j) continue;
            const double gain = link_gain(params.model, platoon.distance(i, j),
                                          platoon_link_id(i, j), round);
            t.platoon_rate_bps[static_cast<std::size_t>(i - 1) * n + static_cast<std::size_t>(j - 1)] =
                link_rate_bps({params.b_v2v_hz, params.p_v_dbm, params.noise_dbm, gain});
        }
    }

    t.vfc_rate_bps.reserve(vfc.vehicles.size());
    for (const VfcVehicle& v : vfc.vehicles) {
        const double gain =
            link_gain(params.model, v.distance_to_leader_m, vfc_link_id(v.vehicle_id), round);
        t.vfc_rate_bps.push_back(
            link_rate_bps({params.b_v2v_hz, params.p_v_dbm, params.noise_dbm, gain}));
    }

    const double rsu_gain = link_gain(params.model, params.rsu_distance_m, rsu_link_id(), round);
    t.rsu_rate_bps = link_rate_bps({params.b_v2i_hz, params.p_r_dbm, params.noise_dbm, rsu_gain});
    return t;
}

double platoon_delay(const DelayTables& tables, int i, int j) {
    if (i == j) {
        if (i < 1 || i > tables.n_vehicles) {
            throw std::out_of_range("platoon index out of range: " + std::to_string(i));
        }
        return 0.0;
    }
    return tables.content_bits / tables.platoon_rate(i, j);
}

double vfc_delay(const DelayTables& tables, int i, int k) {
    const double to_leader = tables.content_bits / tables.vfc_rate(k);
    if (i == 1) return to_leader;
    return to_leader + tables.content_bits / tables.platoon_rate(i, 1);
}

double rsu_delay(const DelayTables& tables, int i) {
    double d = tables.content_bits / tables.backhaul_rate_bps +
               tables.content_bits / tables.rsu_rate_bps;
    if (i != 1) d += tables.content_bits / tables.platoon_rate(i, 1);
    return d;
}

RoundDelay round_delay(const RequestMatrix& requests, const CachingDecision& decision,
                       const DelayTables& tables) {
    const auto index = decision.placement_index();
    RoundDelay out;
    out.per_request_s.reserve(requests.requests.size());
    for (const auto& [i, f] : requests.requests) {
        auto it = index.find(f);
        if (it == index.end()) {
            throw std::logic_error("requested content " + std::to_string(f) +
                                   " is missing from the decision");
        }
        double d = 0.0;
        switch (it->second.tier) {
            case Tier::platoon: d = platoon_delay(tables, i, it->second.node); break;
            case Tier::vfc: d = vfc_delay(tables, i, it->second.node); break;
            case Tier::cloud: d = rsu_delay(tables, i); break;
        }
        out.per_request_s.push_back(d);
    }
    // Accumulate in sorted value order so the objective depends only on the
    // multiset of delays, never on which equal-cost request drew which value.
    std::vector<double> sorted = out.per_request_s;
    std::sort(sorted.begin(), sorted.end());
    for (double d : sorted) out.objective_s += d;
    out.objective_s /= static_cast<double>(tables.n_vehicles);
    return out;
}

}  // namespace vfcsim
