#include "vfcsim/channel.hpp"

#include <cmath>

#include "vfcsim/rng.hpp"

namespace vfcsim {

FadingMode fading_mode_from_string(const std::string& s) {
    if (s == "deterministic") return FadingMode::deterministic;
    if (s == "rayleigh_block" || s == "rayleigh") return FadingMode::rayleigh_block;
    throw std::invalid_argument("unknown fading mode '" + s + "'");
}

const char* to_string(FadingMode m) {
    return m == FadingMode::deterministic ? "deterministic" : "rayleigh_block";
}

double dbm_to_watt(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }

std::uint64_t platoon_link_id(int i, int j) {
    // order-independent: (i,j) and (j,i) share one fade
    if (i > j) std::swap(i, j);
    return (1ULL << 56) | (static_cast<std::uint64_t>(i) << 28) | static_cast<std::uint64_t>(j);
}

std::uint64_t vfc_link_id(int vehicle_id) {
    return (2ULL << 56) | static_cast<std::uint64_t>(vehicle_id);
}

std::uint64_t rsu_link_id() { return 3ULL << 56; }

double link_gain(const ChannelModel& model, double distance_m, std::uint64_t link_id, int round) {
    if (!(distance_m > 0.0)) {
        throw std::invalid_argument("link distance must be positive");
    }
    double gain = model.reference_gain_g0 * std::pow(distance_m, -model.path_loss_exponent);
    if (model.mode == FadingMode::rayleigh_block) {
        Rng rng(derive_seed(model.fading_seed, SeedStream::fading, link_id,
                            static_cast<std::uint64_t>(round)));
        gain *= rng.exponential(1.0);
    }
    return gain;
}

double link_rate_bps(const LinkBudget& budget) {
    const double snr = dbm_to_watt(budget.tx_power_dbm) * budget.gain /
                       dbm_to_watt(budget.noise_power_dbm);
    return budget.bandwidth_hz * std::log2(1.0 + snr);
}

}  // namespace vfcsim
