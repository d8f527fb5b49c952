#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace vfcsim {

enum class FadingMode { deterministic, rayleigh_block };

FadingMode fading_mode_from_string(const std::string& s);
const char* to_string(FadingMode m);

// Log-distance path loss: gain = g0 * d^(-eta), optionally multiplied by a
// unit-mean exponential block fade drawn once per (link, round).
struct ChannelModel {
    double reference_gain_g0 = 1e-5;
    double path_loss_exponent = 3.0;
    FadingMode mode = FadingMode::deterministic;
    std::uint64_t fading_seed = 0;
};

struct LinkBudget {
    double bandwidth_hz = 0.0;
    double tx_power_dbm = 0.0;
    double noise_power_dbm = 0.0;
    double gain = 0.0;  // dimensionless power ratio
};

double dbm_to_watt(double p_dbm);

// Stable ids so block fades replay per (link, round).
std::uint64_t platoon_link_id(int i, int j);
std::uint64_t vfc_link_id(int vehicle_id);
std::uint64_t rsu_link_id();

double link_gain(const ChannelModel& model, double distance_m, std::uint64_t link_id, int round);

// Shannon rate B*log2(1 + P*h/sigma^2) in bit/s.
double link_rate_bps(const LinkBudget& budget);

}  // namespace vfcsim
