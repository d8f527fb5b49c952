#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "vfcsim/catalog.hpp"
#include "vfcsim/config.hpp"
#include "vfcsim/policy.hpp"

namespace vfcsim {

// Dataset loaded once and shared by every sweep point and policy.
struct PreparedData {
    Dataset dataset;
    SplitRatings split;
    VehicleAssignment assignment;
};

// load -> truncate(n_users, n_contents) -> split(test_fraction, seed) ->
// assign(n_platoon).
PreparedData prepare_data(const ExperimentConfig& config);

struct RequestOutcome {
    int vehicle = 0;
    int content_id = 0;
    std::vector<int> users;
    double delay_s = 0.0;
    Tier tier = Tier::cloud;
};

struct RoundRecord {
    int round = 0;
    int vfc_size = 0;
    std::uint64_t decision_digest = 0;
    nlohmann::json decision;  // tier -> id lists
    int hits = 0;
    int misses = 0;
    double objective_s = 0.0;
    bool zero_requests = false;
    bool provider_ok = true;
    bool used_fallback = false;
    bool list_extended = false;
    std::vector<RequestOutcome> requests;
};

struct Metrics {
    double achr_pct = 0.0;  // mean of per-round hit ratios, zero-request rounds excluded
    double actd_s = 0.0;    // mean of per-round objectives over all rounds
    int zero_request_rounds = 0;
};

Metrics compute_metrics(const std::vector<RoundRecord>& records);

struct ExperimentResult {
    std::string policy;
    std::uint64_t seed = 0;
    int rounds = 0;
    int platoon_cache_units = 0;  // N * floor(M_p / s)
    double avg_vfc_vehicles = 0.0;
    Metrics metrics;
    std::vector<RoundRecord> round_records;
    nlohmann::json config_snapshot;
    double wall_s = 0.0;
};

// One policy over R rounds with VFC advancing between rounds. The request
// stream and world evolution derive from (seed, round) only, so every policy
// and sweep point sees the same worlds.
ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& data,
                                Policy& policy);

struct SweepSpec {
    // Total platoon cache sizes in content slots; empty = config as-is.
    std::vector<int> cache_units;
    // Target mean VFC sizes via the calibration knob; empty = config as-is.
    std::vector<double> vfc_means;
};

// Cartesian sweep: cache point x VFC point x policy. The provider is shared
// across points (the LLM policy needs one); transcript may be null.
std::vector<ExperimentResult> run_sweep(const ExperimentConfig& config, const PreparedData& data,
                                        const SweepSpec& sweep, Provider* provider,
                                        TranscriptLog* transcript);

// CSV with the fixed header policy,platoon_cache_units,avg_vfc_vehicles,
// achr_pct,actd_s,actd_ms,seed,rounds.
std::string results_csv(const std::vector<ExperimentResult>& results);

struct WrittenPaths {
    std::string run_dir;
    std::string results_csv;
    std::string config_json;
    std::vector<std::string> round_logs;
};

// Writes results.csv, config.json and one rounds JSONL per result into a
// fresh run-<id> directory; existing runs are never overwritten.
WrittenPaths write_results(const std::vector<ExperimentResult>& results,
                           const ExperimentConfig& config, const std::string& out_dir);

}  // namespace vfcsim
