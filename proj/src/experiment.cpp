#include "vfcsim/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "vfcsim/delay.hpp"
#include "vfcsim/rng.hpp"

namespace vfcsim {

namespace {

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::platoon: return "platoon";
        case Tier::vfc: return "vfc";
        case Tier::cloud: return "cloud";
    }
    return "?";
}

RoundRecord run_round(int round, const ExperimentConfig& config, const PreparedData& data,
                      const PlatoonState& platoon, const VfcState& vfc,
                      const RequestMatrix& requests, Policy& policy) {
    const DelayTables tables =
        build_delay_tables(platoon, vfc, config.link_params(), config.s_bytes, round);
    const CapacityPlan plan = capacity_slots(platoon, vfc, config.s_bytes);

    RoundInputs inputs{round,
                       config.seed,
                       platoon,
                       vfc,
                       data.dataset.users,
                       data.dataset.catalog,
                       data.split.train,
                       data.assignment,
                       tables,
                       plan,
                       requests,
                       config.s_bytes,
                       config.prompt_top_t};
    PolicyOutcome outcome = policy.decide(inputs);

    const ValidationReport report = validate(outcome.decision, plan, data.dataset.catalog);
    if (!report.ok()) {
        throw std::logic_error("policy '" + policy.name() + "' produced an invalid decision in round " +
                               std::to_string(round) + ":\n" + report.to_string());
    }

    const RoundDelay delays = round_delay(requests, outcome.decision, tables);
    const auto placement = outcome.decision.placement_index();

    RoundRecord rec;
    rec.round = round;
    rec.vfc_size = vfc.size();
    rec.decision_digest = decision_digest(outcome.decision);
    rec.decision = decision_to_json(outcome.decision);
    rec.objective_s = delays.objective_s;
    rec.zero_requests = requests.requests.empty();
    rec.provider_ok = outcome.provider_ok;
    rec.used_fallback = outcome.used_fallback;
    rec.list_extended = outcome.list_extended;
    for (std::size_t k = 0; k < requests.requests.size(); ++k) {
        const auto& [i, f] = requests.requests[k];
        RequestOutcome ro;
        ro.vehicle = i;
        ro.content_id = f;
        ro.users = requests.requesting_users.at({i, f});
        ro.delay_s = delays.per_request_s[k];
        ro.tier = placement.at(f).tier;
        if (ro.tier == Tier::platoon) {
            ++rec.hits;
        } else {
            ++rec.misses;
        }
        rec.requests.push_back(std::move(ro));
    }
    return rec;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& config) {
    config.validate();
    if (config.users_path.empty() || config.movies_path.empty() || config.ratings_path.empty()) {
        throw std::invalid_argument("config must name users_path, movies_path and ratings_path");
    }
    PreparedData data;
    data.dataset = load_dataset(config.users_path, config.movies_path, config.ratings_path,
                                config.s_bytes);
    data.dataset = truncate_dataset(std::move(data.dataset), config.n_users, config.n_contents);
    data.split = split_ratings(data.dataset.ratings, config.test_fraction, config.seed);
    data.assignment = assign_users(data.dataset.users, config.n_platoon);
    return data;
}

Metrics compute_metrics(const std::vector<RoundRecord>& records) {
    if (records.empty()) throw std::invalid_argument("metrics need at least one round");
    Metrics m;
    double ratio_sum = 0.0;
    int counted = 0;
    for (const RoundRecord& r : records) {
        m.actd_s += r.objective_s;
        if (r.zero_requests) {
            ++m.zero_request_rounds;
            continue;
        }
        ratio_sum += static_cast<double>(r.hits) / static_cast<double>(r.hits + r.misses);
        ++counted;
    }
    m.achr_pct = counted > 0 ? 100.0 * ratio_sum / static_cast<double>(counted) : 0.0;
    m.actd_s /= static_cast<double>(records.size());
    return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& data,
                                Policy& policy) {
    const auto t0 = std::chrono::steady_clock::now();
    config.validate();

    const ScenarioConfig scenario = config.scenario();
    auto [platoon, vfc] = build_initial_state(scenario, config.seed);

    ExperimentResult result;
    result.policy = policy.name();
    result.seed = config.seed;
    result.rounds = config.rounds;
    result.platoon_cache_units =
        config.n_platoon * static_cast<int>(config.m_p_bytes / config.s_bytes);
    result.config_snapshot = config.to_json();

    double vfc_sum = 0.0;
    for (int round = 1; round <= config.rounds; ++round) {
        if (round > 1) vfc = advance_vfc(vfc, scenario, config.seed);
        vfc_sum += vfc.size();
        const RequestMatrix requests =
            sample_requests(data.split.test, data.assignment, platoon,
                            derive_seed(config.seed, SeedStream::requests,
                                        static_cast<std::uint64_t>(round)));
        result.round_records.push_back(
            run_round(round, config, data, platoon, vfc, requests, policy));
    }

    result.avg_vfc_vehicles = vfc_sum / static_cast<double>(config.rounds);
    result.metrics = compute_metrics(result.round_records);
    result.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::vector<ExperimentResult> run_sweep(const ExperimentConfig& config, const PreparedData& data,
                                        const SweepSpec& sweep, Provider* provider,
                                        TranscriptLog* transcript) {
    std::vector<int> cache_points = sweep.cache_units;
    if (cache_points.empty()) {
        cache_points.push_back(config.n_platoon *
                               static_cast<int>(config.m_p_bytes / config.s_bytes));
    }
    std::vector<double> vfc_points = sweep.vfc_means;
    if (vfc_points.empty()) vfc_points.push_back(config.vfc_target_mean);

    std::vector<ExperimentResult> results;
    for (int units : cache_points) {
        for (double mean : vfc_points) {
            ExperimentConfig point = config;
            const int per_vehicle = units / config.n_platoon;
            if (per_vehicle < 1) {
                throw std::invalid_argument("cache sweep point " + std::to_string(units) +
                                            " yields no slots for " +
                                            std::to_string(config.n_platoon) + " vehicles");
            }
            point.m_p_bytes = static_cast<std::int64_t>(per_vehicle) * config.s_bytes;
            point.vfc_target_mean = mean;
            for (const std::string& name : point.policies) {
                auto policy = make_policy(name, provider, transcript);
                results.push_back(run_experiment(point, data, *policy));
            }
        }
    }
    return results;
}

std::string results_csv(const std::vector<ExperimentResult>& results) {
    std::string csv = "policy,platoon_cache_units,avg_vfc_vehicles,achr_pct,actd_s,actd_ms,seed,rounds\n";
    for (const ExperimentResult& r : results) {
        csv += r.policy;
        csv += "," + std::to_string(r.platoon_cache_units);
        csv += "," + format_double("%.3f", r.avg_vfc_vehicles);
        csv += "," + format_double("%.4f", r.metrics.achr_pct);
        csv += "," + format_double("%.9f", r.metrics.actd_s);
        csv += "," + format_double("%.6f", r.metrics.actd_s * 1e3);
        csv += "," + std::to_string(r.seed);
        csv += "," + std::to_string(r.rounds);
        csv += "\n";
    }
    return csv;
}

namespace {

nlohmann::json round_to_json(const ExperimentResult& result, const RoundRecord& r) {
    nlohmann::json j;
    j["policy"] = result.policy;
    j["round"] = r.round;
    j["vfc_size"] = r.vfc_size;
    char digest_hex[17];
    std::snprintf(digest_hex, sizeof digest_hex, "%016llx",
                  static_cast<unsigned long long>(r.decision_digest));
    j["decision_digest"] = digest_hex;
    j["decision"] = r.decision;
    j["hits"] = r.hits;
    j["misses"] = r.misses;
    j["objective_s"] = r.objective_s;
    j["zero_requests"] = r.zero_requests;
    j["provider_ok"] = r.provider_ok;
    j["used_fallback"] = r.used_fallback;
    j["list_extended"] = r.list_extended;
    nlohmann::json reqs = nlohmann::json::array();
    for (const RequestOutcome& ro : r.requests) {
        reqs.push_back({{"vehicle", ro.vehicle},
                        {"content_id", ro.content_id},
                        {"users", ro.users},
                        {"delay_s", ro.delay_s},
                        {"tier", tier_name(ro.tier)}});
    }
    j["requests"] = std::move(reqs);
    return j;
}

}  // namespace

WrittenPaths write_results(const std::vector<ExperimentResult>& results,
                           const ExperimentConfig& config, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm_utc);
    const std::uint64_t digest = fnv1a(config.to_json().dump() + std::to_string(config.seed));
    char digest_hex[17];
    std::snprintf(digest_hex, sizeof digest_hex, "%08llx",
                  static_cast<unsigned long long>(digest & 0xffffffffULL));

    fs::path run_dir;
    for (int attempt = 0;; ++attempt) {
        std::string name = std::string("run-") + stamp + "-" + digest_hex;
        if (attempt > 0) name += "-" + std::to_string(attempt + 1);
        run_dir = fs::path(out_dir) / name;
        if (!fs::exists(run_dir)) break;
    }
    fs::create_directories(run_dir);

    WrittenPaths paths;
    paths.run_dir = run_dir.string();

    paths.results_csv = (run_dir / "results.csv").string();
    {
        std::ofstream out(paths.results_csv, std::ios::binary);
        out << results_csv(results);
    }

    paths.config_json = (run_dir / "config.json").string();
    {
        std::ofstream out(paths.config_json);
        out << config.to_json().dump(2) << "\n";
    }

    for (const ExperimentResult& r : results) {
        char mean_buf[32];
        std::snprintf(mean_buf, sizeof mean_buf, "%g",
                      r.config_snapshot.value("vfc_target_mean", 0.0));
        const std::string name = "rounds_" + r.policy + "_" +
                                 std::to_string(r.platoon_cache_units) + "_" + mean_buf + "_" +
                                 std::to_string(r.seed) + ".jsonl";
        const std::string path = (run_dir / name).string();
        std::ofstream out(path);
        for (const RoundRecord& rec : r.round_records) {
            out << round_to_json(r, rec).dump() << "\n";
        }
        paths.round_logs.push_back(path);
    }
    return paths;
}

}  // namespace vfcsim
