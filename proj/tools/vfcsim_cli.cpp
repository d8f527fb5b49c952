#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vfcsim/config.hpp"
#include "vfcsim/experiment.hpp"
#include "vfcsim/synthetic.hpp"

namespace {

using namespace vfcsim;

std::vector<int> parse_range(const std::string& s) {
    // "50:400:50" -> 50, 100, ..., 400
    std::vector<int> out;
    const std::size_t c1 = s.find(':');
    const std::size_t c2 = s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw CLI::ValidationError("expected START:STOP:STEP, got '" + s + "'");
    }
    const int start = std::stoi(s.substr(0, c1));
    const int stop = std::stoi(s.substr(c1 + 1, c2 - c1 - 1));
    const int step = std::stoi(s.substr(c2 + 1));
    if (step <= 0 || stop < start) throw CLI::ValidationError("bad sweep range '" + s + "'");
    for (int v = start; v <= stop; v += step) out.push_back(v);
    return out;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& policies,
                 const std::string& sweep_cache, const std::string& sweep_vfc,
                 std::uint64_t seed, bool seed_set, const std::string& out_dir,
                 const std::string& provider, const std::string& record) {
    ExperimentConfig config = ExperimentConfig::from_file(config_path);
    if (!policies.empty()) config.policies = policies;
    if (seed_set) config.seed = seed;
    if (!provider.empty()) config.provider = provider;
    if (!record.empty()) config.record_path = record;
    config.validate();

    SweepSpec sweep;
    if (!sweep_cache.empty()) sweep.cache_units = parse_range(sweep_cache);
    if (!sweep_vfc.empty()) sweep.vfc_means = parse_list(sweep_vfc);

    const PreparedData data = prepare_data(config);
    std::cerr << "dataset: " << data.dataset.users.size() << " users, "
              << data.dataset.catalog.size() << " contents, "
              << data.dataset.ratings.entries.size() << " ratings ("
              << data.split.train.entries.size() << " train / "
              << data.split.test.entries.size() << " test)\n";

    std::unique_ptr<Provider> provider_impl;
    bool needs_provider = false;
    for (const std::string& p : config.policies) needs_provider |= (p == "llm");
    if (needs_provider) provider_impl = make_provider(config.provider_spec());

    std::unique_ptr<TranscriptLog> transcript;
    if (!config.record_path.empty() && config.provider != "recorded") {
        transcript = std::make_unique<TranscriptLog>(config.record_path);
    }

    const auto results = run_sweep(config, data, sweep, provider_impl.get(), transcript.get());
    const WrittenPaths paths = write_results(results, config, out_dir);

    std::cout << results_csv(results);
    std::cerr << "wrote " << paths.results_csv << "\n";
    return 0;
}

int cmd_validate_config(const std::string& config_path) {
    try {
        ExperimentConfig config = ExperimentConfig::from_file(config_path);
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return 1;
    }
    std::cout << "ok\n";
    return 0;
}

int cmd_inspect_prompt(const std::string& config_path, int round, std::uint64_t seed,
                       bool seed_set) {
    ExperimentConfig config = ExperimentConfig::from_file(config_path);
    if (seed_set) config.seed = seed;
    config.validate();
    if (round < 1 || round > config.rounds) {
        std::cerr << "round must lie in [1, " << config.rounds << "]\n";
        return 1;
    }
    const PreparedData data = prepare_data(config);
    const ScenarioConfig scenario = config.scenario();
    auto [platoon, vfc] = build_initial_state(scenario, config.seed);
    for (int r = 2; r <= round; ++r) vfc = advance_vfc(vfc, scenario, config.seed);

    const HeterogeneousInfo info =
        collect_info(platoon, vfc, data.dataset.users, data.dataset.catalog, data.split.train,
                     data.assignment, config.s_bytes, config.prompt_top_t);
    std::cout << build_prompt(info).assembled() << "\n";
    return 0;
}

int cmd_generate_dataset(const std::string& out_dir, int users, int contents,
                         std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_users = users;
    spec.n_contents = contents;
    spec.seed = seed;
    const SyntheticPaths paths = write_synthetic_dataset(out_dir, spec);
    std::cout << paths.users << "\n" << paths.movies << "\n" << paths.ratings << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-tier platoon/VFC/cloud content caching simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> policies;
    std::string sweep_cache, sweep_vfc;
    std::uint64_t seed = 0;
    std::string out_dir = "results";
    std::string provider;
    std::string record;

    auto* simulate = app.add_subcommand("simulate", "Run rounds and write ACHR/ACTD results");
    simulate->add_option("--config", config_path, "Config JSON path")->required();
    simulate->add_option("--policy", policies, "Policy roster override (repeatable)");
    simulate->add_option("--sweep-cache", sweep_cache, "Platoon cache sweep START:STOP:STEP in slots");
    simulate->add_option("--sweep-vfc", sweep_vfc, "Target mean VFC sizes, comma separated");
    auto* seed_opt = simulate->add_option("--seed", seed, "Master seed override");
    simulate->add_option("--out", out_dir, "Output directory (default: results)");
    simulate->add_option("--provider", provider, "Provider override: mock|recorded|http");
    simulate->add_option("--record", record,
                         "Transcript path: capture target, or the store to replay with "
                         "--provider recorded");

    std::string vc_config;
    auto* validate_cmd = app.add_subcommand("validate-config", "Check a config file");
    validate_cmd->add_option("--config", vc_config, "Config JSON path")->required();

    std::string ip_config;
    int ip_round = 1;
    std::uint64_t ip_seed = 0;
    auto* inspect = app.add_subcommand("inspect-prompt",
                                       "Print the assembled prompt for a round without any provider call");
    inspect->add_option("--config", ip_config, "Config JSON path")->required();
    inspect->add_option("--round", ip_round, "Round index (1-based)")->required();
    auto* ip_seed_opt = inspect->add_option("--seed", ip_seed, "Master seed override");

    std::string gd_out = "data";
    int gd_users = 30;
    int gd_contents = 2000;
    std::uint64_t gd_seed = 1;
    auto* generate = app.add_subcommand("generate-dataset",
                                        "Write a synthetic MovieLens-format dataset");
    generate->add_option("--out", gd_out, "Output directory");
    generate->add_option("--users", gd_users, "User count");
    generate->add_option("--contents", gd_contents, "Content count");
    generate->add_option("--seed", gd_seed, "Generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(config_path, policies, sweep_cache, sweep_vfc, seed,
                                seed_opt->count() > 0, out_dir, provider, record);
        }
        if (validate_cmd->parsed()) return cmd_validate_config(vc_config);
        if (inspect->parsed()) {
            return cmd_inspect_prompt(ip_config, ip_round, ip_seed, ip_seed_opt->count() > 0);
        }
        if (generate->parsed()) return cmd_generate_dataset(gd_out, gd_users, gd_contents, gd_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
