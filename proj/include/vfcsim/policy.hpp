#pragma once

#include <memory>
#include <optional>
#include <string>

#include "vfcsim/catalog.hpp"
#include "vfcsim/decision.hpp"
#include "vfcsim/delay.hpp"
#include "vfcsim/prompt.hpp"
#include "vfcsim/provider.hpp"
#include "vfcsim/scenario.hpp"
#include "vfcsim/solver.hpp"

namespace vfcsim {

// Contents ordered by descending train-rating count (ties ascending id),
// padded with unrated ids ascending; covers the whole catalog.
RankedList popularity_rank(const RatingLog& train, const ContentCatalog& catalog);

// Seeded uniform permutation of the catalog ids.
RankedList random_rank(const ContentCatalog& catalog, std::uint64_t seed);

struct RoundInputs {
    int round = 0;
    std::uint64_t seed = 0;
    const PlatoonState& platoon;
    const VfcState& vfc;
    const UserProfiles& profiles;
    const ContentCatalog& catalog;
    const RatingLog& train;
    const VehicleAssignment& assignment;
    const DelayTables& tables;
    const CapacityPlan& plan;
    // Oracle-only: realized requests of the round. Predictive policies must
    // not read it; the clairvoyant baseline does.
    const RequestMatrix& requests;
    std::int64_t s_bytes = 0;
    int prompt_top_t = 200;
};

struct PolicyOutcome {
    CachingDecision decision;
    std::optional<RankedList> list;       // for list-driven policies
    std::optional<PromptBundle> prompt;   // for the LLM policy
    bool provider_ok = true;
    bool used_fallback = false;           // provider failure -> popularity list
    bool list_extended = false;           // mapper had to extend a short list
    std::string provider_error;
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual PolicyOutcome decide(const RoundInputs& in) = 0;
};

// collect_info -> build_prompt -> provider -> parse -> map. On provider or
// parse failure the round falls back to the popularity ranking and is flagged.
class LlmPolicy : public Policy {
public:
    LlmPolicy(Provider& provider, TranscriptLog* transcript = nullptr)
        : provider_(provider), transcript_(transcript) {}
    std::string name() const override { return "llm"; }
    PolicyOutcome decide(const RoundInputs& in) override;

private:
    Provider& provider_;
    TranscriptLog* transcript_;
};

class PopularityPolicy : public Policy {
public:
    std::string name() const override { return "popularity"; }
    PolicyOutcome decide(const RoundInputs& in) override;
};

class RandomPolicy : public Policy {
public:
    std::string name() const override { return "random"; }
    PolicyOutcome decide(const RoundInputs& in) override;
};

class ClairvoyantPolicy : public Policy {
public:
    std::string name() const override { return "clairvoyant"; }
    PolicyOutcome decide(const RoundInputs& in) override;
};

// Factory for the roster names: llm, popularity, random, clairvoyant.
std::unique_ptr<Policy> make_policy(const std::string& name, Provider* provider,
                                    TranscriptLog* transcript);

}  // namespace vfcsim
