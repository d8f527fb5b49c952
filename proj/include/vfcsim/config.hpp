#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "vfcsim/channel.hpp"
#include "vfcsim/delay.hpp"
#include "vfcsim/provider.hpp"
#include "vfcsim/scenario.hpp"

namespace vfcsim {

// Flat key-value configuration mirroring the default system parameters.
struct ExperimentConfig {
    // scenario
    int n_platoon = 10;
    double spacing_m = 20.0;
    double comm_radius_m = 200.0;
    double v_p_kmh = 55.0;
    int k_max = 10;
    double lambda_v = 9.0;
    double mu_v = 8.0;
    double vfc_arrival_scale = 1.0;
    double vfc_count_norm = 1.0;
    // > 0 overrides vfc_arrival_scale through the calibration rule and lifts
    // k_max to at least twice the target, so swept means are reachable.
    double vfc_target_mean = 0.0;
    std::int64_t m_p_bytes = 1000;
    std::int64_t m_min_bytes = 600;
    std::int64_t m_max_bytes = 1500;
    std::int64_t s_bytes = 100;

    // channel
    double b_v2v_hz = 1000000.0;
    double b_v2i_hz = 540000.0;
    double p_v_dbm = 23.0;
    double p_r_dbm = 30.0;
    double noise_dbm = -114.0;
    double r_rc_bps = 800000.0;
    double rsu_distance_m = 100.0;
    double g0 = 1e-5;
    double eta = 3.0;
    std::string fading_mode = "deterministic";

    // experiment
    int rounds = 12;
    std::uint64_t seed = 1;
    int n_users = 30;
    int n_contents = 2000;
    double test_fraction = 0.2;
    int prompt_top_t = 200;
    std::vector<std::string> policies = {"llm", "popularity", "random", "clairvoyant"};

    // dataset
    std::string users_path;
    std::string movies_path;
    std::string ratings_path;

    // provider
    std::string provider = "mock";
    std::string provider_endpoint;
    std::string provider_model;
    double provider_temperature = 0.0;
    int provider_timeout_ms = 30000;
    int provider_max_retries = 2;
    std::string api_key_env = "VFCSIM_API_KEY";
    std::string record_path;  // capture transcript here; with provider=recorded, the store to replay

    // carried from the parameter table for provenance; unused by the model
    double alpha = 0.75;
    double beta = 0.25;
    double gamma = 0.002;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
    void validate() const;  // throws std::invalid_argument

    ScenarioConfig scenario() const;
    LinkParams link_params() const;
    ProviderSpec provider_spec() const;
};

}  // namespace vfcsim
