#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vfcsim/channel.hpp"
#include "vfcsim/decision.hpp"
#include "vfcsim/scenario.hpp"

namespace vfcsim {

// Per-round link rates. Platoon entries are 1-based (i, j), VFC entries are
// 1-based ranks in ascending-distance order.
struct DelayTables {
    int n_vehicles = 0;
    double content_bits = 0.0;  // 8 * s
    std::vector<double> platoon_rate_bps;  // row-major (i-1)*N + (j-1), diagonal unused
    std::vector<double> vfc_rate_bps;      // [k-1]
    double rsu_rate_bps = 0.0;
    double backhaul_rate_bps = 0.0;

    double platoon_rate(int i, int j) const;
    double vfc_rate(int k) const;
};

struct LinkParams {
    double b_v2v_hz = 1e6;
    double b_v2i_hz = 540e3;
    double p_v_dbm = 23.0;
    double p_r_dbm = 30.0;
    double noise_dbm = -114.0;
    double r_rc_bps = 0.8e6;
    double rsu_distance_m = 100.0;
    ChannelModel model;
};

DelayTables build_delay_tables(const PlatoonState& platoon, const VfcState& vfc,
                               const LinkParams& params, std::int64_t s_bytes, int round);

double platoon_delay(const DelayTables& tables, int i, int j);
double vfc_delay(const DelayTables& tables, int i, int k);
double rsu_delay(const DelayTables& tables, int i);

struct RoundDelay {
    // sorted by (i, f), matching RequestMatrix::requests
    std::vector<double> per_request_s;
    double objective_s = 0.0;  // (1/N) * sum of all per-request delays
};

// Dispatches every requested (i, f) on the tier that holds f.
RoundDelay round_delay(const RequestMatrix& requests, const CachingDecision& decision,
                       const DelayTables& tables);

}  // namespace vfcsim
