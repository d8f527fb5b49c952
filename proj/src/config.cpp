#include "vfcsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace vfcsim {

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "n_platoon", "spacing_m", "comm_radius_m", "v_p_kmh", "k_max", "lambda_v", "mu_v",
        "vfc_arrival_scale", "vfc_count_norm", "vfc_target_mean", "m_p_bytes", "m_min_bytes",
        "m_max_bytes", "s_bytes", "b_v2v_hz", "b_v2i_hz", "p_v_dbm", "p_r_dbm", "noise_dbm",
        "r_rc_bps", "rsu_distance_m", "g0", "eta", "fading_mode", "rounds", "seed", "n_users",
        "n_contents", "test_fraction", "prompt_top_t", "policies", "users_path", "movies_path",
        "ratings_path", "provider", "provider_endpoint", "provider_model", "provider_temperature",
        "provider_timeout_ms", "provider_max_retries", "api_key_env", "record_path", "alpha",
        "beta", "gamma"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }

    ExperimentConfig c;
    read(j, "n_platoon", c.n_platoon);
    read(j, "spacing_m", c.spacing_m);
    read(j, "comm_radius_m", c.comm_radius_m);
    read(j, "v_p_kmh", c.v_p_kmh);
    read(j, "k_max", c.k_max);
    read(j, "lambda_v", c.lambda_v);
    read(j, "mu_v", c.mu_v);
    read(j, "vfc_arrival_scale", c.vfc_arrival_scale);
    read(j, "vfc_count_norm", c.vfc_count_norm);
    read(j, "vfc_target_mean", c.vfc_target_mean);
    read(j, "m_p_bytes", c.m_p_bytes);
    read(j, "m_min_bytes", c.m_min_bytes);
    read(j, "m_max_bytes", c.m_max_bytes);
    read(j, "s_bytes", c.s_bytes);
    read(j, "b_v2v_hz", c.b_v2v_hz);
    read(j, "b_v2i_hz", c.b_v2i_hz);
    read(j, "p_v_dbm", c.p_v_dbm);
    read(j, "p_r_dbm", c.p_r_dbm);
    read(j, "noise_dbm", c.noise_dbm);
    read(j, "r_rc_bps", c.r_rc_bps);
    read(j, "rsu_distance_m", c.rsu_distance_m);
    read(j, "g0", c.g0);
    read(j, "eta", c.eta);
    read(j, "fading_mode", c.fading_mode);
    read(j, "rounds", c.rounds);
    read(j, "seed", c.seed);
    read(j, "n_users", c.n_users);
    read(j, "n_contents", c.n_contents);
    read(j, "test_fraction", c.test_fraction);
    read(j, "prompt_top_t", c.prompt_top_t);
    read(j, "policies", c.policies);
    read(j, "users_path", c.users_path);
    read(j, "movies_path", c.movies_path);
    read(j, "ratings_path", c.ratings_path);
    read(j, "provider", c.provider);
    read(j, "provider_endpoint", c.provider_endpoint);
    read(j, "provider_model", c.provider_model);
    read(j, "provider_temperature", c.provider_temperature);
    read(j, "provider_timeout_ms", c.provider_timeout_ms);
    read(j, "provider_max_retries", c.provider_max_retries);
    read(j, "api_key_env", c.api_key_env);
    read(j, "record_path", c.record_path);
    read(j, "alpha", c.alpha);
    read(j, "beta", c.beta);
    read(j, "gamma", c.gamma);
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["n_platoon"] = n_platoon;
    j["spacing_m"] = spacing_m;
    j["comm_radius_m"] = comm_radius_m;
    j["v_p_kmh"] = v_p_kmh;
    j["k_max"] = k_max;
    j["lambda_v"] = lambda_v;
    j["mu_v"] = mu_v;
    j["vfc_arrival_scale"] = vfc_arrival_scale;
    j["vfc_count_norm"] = vfc_count_norm;
    j["vfc_target_mean"] = vfc_target_mean;
    j["m_p_bytes"] = m_p_bytes;
    j["m_min_bytes"] = m_min_bytes;
    j["m_max_bytes"] = m_max_bytes;
    j["s_bytes"] = s_bytes;
    j["b_v2v_hz"] = b_v2v_hz;
    j["b_v2i_hz"] = b_v2i_hz;
    j["p_v_dbm"] = p_v_dbm;
    j["p_r_dbm"] = p_r_dbm;
    j["noise_dbm"] = noise_dbm;
    j["r_rc_bps"] = r_rc_bps;
    j["rsu_distance_m"] = rsu_distance_m;
    j["g0"] = g0;
    j["eta"] = eta;
    j["fading_mode"] = fading_mode;
    j["rounds"] = rounds;
    j["seed"] = seed;
    j["n_users"] = n_users;
    j["n_contents"] = n_contents;
    j["test_fraction"] = test_fraction;
    j["prompt_top_t"] = prompt_top_t;
    j["policies"] = policies;
    j["users_path"] = users_path;
    j["movies_path"] = movies_path;
    j["ratings_path"] = ratings_path;
    j["provider"] = provider;
    j["provider_endpoint"] = provider_endpoint;
    j["provider_model"] = provider_model;
    j["provider_temperature"] = provider_temperature;
    j["provider_timeout_ms"] = provider_timeout_ms;
    j["provider_max_retries"] = provider_max_retries;
    j["api_key_env"] = api_key_env;
    j["record_path"] = record_path;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["gamma"] = gamma;
    return j;
}

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(n_platoon >= 1, "n_platoon must be >= 1");
    require(k_max >= 1, "k_max must be >= 1");
    require(rounds >= 1, "rounds must be >= 1");
    require(s_bytes > 0, "s_bytes must be positive");
    require(m_p_bytes >= 0, "m_p_bytes must be non-negative");
    require(m_min_bytes > 0 && m_min_bytes <= m_max_bytes, "m_min/m_max bytes are inconsistent");
    require(spacing_m > 0.0, "spacing_m must be positive");
    require(comm_radius_m > 0.0, "comm_radius_m must be positive");
    require(rsu_distance_m > 0.0, "rsu_distance_m must be positive");
    require(b_v2v_hz > 0.0 && b_v2i_hz > 0.0, "bandwidths must be positive");
    require(r_rc_bps > 0.0, "r_rc_bps must be positive");
    require(g0 > 0.0, "g0 must be positive");
    require(eta >= 2.0, "eta must be >= 2");
    require(lambda_v >= 0.0 && mu_v >= 0.0, "lambda_v and mu_v must be non-negative");
    require(vfc_arrival_scale >= 0.0, "vfc_arrival_scale must be non-negative");
    require(vfc_count_norm > 0.0, "vfc_count_norm must be positive");
    require(vfc_target_mean >= 0.0, "vfc_target_mean must be non-negative");
    require(test_fraction > 0.0 && test_fraction < 1.0, "test_fraction must lie in (0,1)");
    require(!policies.empty(), "policy roster is empty");
    fading_mode_from_string(fading_mode);          // throws on unknown mode
    provider_kind_from_string(provider);           // throws on unknown provider
    static const std::set<std::string> roster = {"llm", "popularity", "random", "clairvoyant"};
    for (const std::string& p : policies) {
        require(roster.count(p) != 0, "unknown policy '" + p + "'");
    }
}

ScenarioConfig ExperimentConfig::scenario() const {
    ScenarioConfig s;
    s.n_platoon = n_platoon;
    s.spacing_m = spacing_m;
    s.comm_radius_m = comm_radius_m;
    s.speed_kmh = v_p_kmh;
    s.k_max = k_max;
    s.lambda_v = lambda_v;
    s.mu_v = mu_v;
    s.arrival_scale = vfc_arrival_scale;
    s.count_norm = vfc_count_norm;
    if (vfc_target_mean > 0.0) {
        s.arrival_scale = calibrate_arrival_scale(vfc_target_mean, lambda_v, mu_v, vfc_count_norm);
        s.k_max = std::max(k_max, static_cast<int>(std::ceil(2.0 * vfc_target_mean)));
    }
    s.m_p_bytes = m_p_bytes;
    s.m_min_bytes = m_min_bytes;
    s.m_max_bytes = m_max_bytes;
    s.s_bytes = s_bytes;
    return s;
}

LinkParams ExperimentConfig::link_params() const {
    LinkParams p;
    p.b_v2v_hz = b_v2v_hz;
    p.b_v2i_hz = b_v2i_hz;
    p.p_v_dbm = p_v_dbm;
    p.p_r_dbm = p_r_dbm;
    p.noise_dbm = noise_dbm;
    p.r_rc_bps = r_rc_bps;
    p.rsu_distance_m = rsu_distance_m;
    p.model.reference_gain_g0 = g0;
    p.model.path_loss_exponent = eta;
    p.model.mode = fading_mode_from_string(fading_mode);
    p.model.fading_seed = seed;
    return p;
}

ProviderSpec ExperimentConfig::provider_spec() const {
    ProviderSpec s;
    s.kind = provider_kind_from_string(provider);
    s.endpoint = provider_endpoint;
    s.model = provider_model;
    s.temperature = provider_temperature;
    s.timeout_ms = provider_timeout_ms;
    s.max_retries = provider_max_retries;
    s.api_key_env = api_key_env;
    s.store_path = record_path;
    s.seed = seed;
    return s;
}

}  // namespace vfcsim
