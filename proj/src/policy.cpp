#include "vfcsim/policy.hpp"

#include <algorithm>
#include <unordered_map>

#include "vfcsim/rng.hpp"

namespace vfcsim {

RankedList popularity_rank(const RatingLog& train, const ContentCatalog& catalog) {
    std::unordered_map<int, int> count;
    for (const Rating& r : train.entries) ++count[r.content_id];

    std::vector<std::pair<int, int>> rated;  // (count, id)
    std::vector<int> unrated;
    for (const ContentItem& item : catalog.items()) {
        auto it = count.find(item.content_id);
        if (it != count.end()) {
            rated.emplace_back(it->second, item.content_id);
        } else {
            unrated.push_back(item.content_id);
        }
    }
    std::sort(rated.begin(), rated.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    RankedList list;
    list.ids.reserve(catalog.size());
    for (const auto& [c, f] : rated) list.ids.push_back(f);
    list.ids.insert(list.ids.end(), unrated.begin(), unrated.end());
    return list;
}

RankedList random_rank(const ContentCatalog& catalog, std::uint64_t seed) {
    RankedList list;
    list.ids.reserve(catalog.size());
    for (const ContentItem& item : catalog.items()) list.ids.push_back(item.content_id);
    Rng rng(seed);
    rng.shuffle(list.ids);
    return list;
}

PolicyOutcome LlmPolicy::decide(const RoundInputs& in) {
    PolicyOutcome out;
    const HeterogeneousInfo info = collect_info(in.platoon, in.vfc, in.profiles, in.catalog,
                                                in.train, in.assignment, in.s_bytes,
                                                in.prompt_top_t);
    out.prompt = build_prompt(info);

    const RankedList fallback = popularity_rank(in.train, in.catalog);
    RankOutcome ranked = rank_with_provider(*out.prompt, provider_, in.round, transcript_);
    if (ranked.ok) {
        out.list = std::move(ranked.list);
    } else {
        out.provider_ok = false;
        out.used_fallback = true;
        out.provider_error = ranked.error;
        out.list = fallback;
    }
    out.decision = map_list_to_decision(*out.list, in.plan, in.catalog, fallback,
                                        &out.list_extended);
    return out;
}

PolicyOutcome PopularityPolicy::decide(const RoundInputs& in) {
    PolicyOutcome out;
    out.list = popularity_rank(in.train, in.catalog);
    out.decision = map_list_to_decision(*out.list, in.plan, in.catalog, *out.list);
    return out;
}

PolicyOutcome RandomPolicy::decide(const RoundInputs& in) {
    PolicyOutcome out;
    out.list = random_rank(in.catalog, derive_seed(in.seed, SeedStream::random_policy,
                                                   static_cast<std::uint64_t>(in.round)));
    out.decision = map_list_to_decision(*out.list, in.plan, in.catalog, *out.list);
    return out;
}

PolicyOutcome ClairvoyantPolicy::decide(const RoundInputs& in) {
    PolicyOutcome out;
    out.decision = clairvoyant_place(in.requests, in.plan, in.tables, in.catalog);
    return out;
}

std::unique_ptr<Policy> make_policy(const std::string& name, Provider* provider,
                                    TranscriptLog* transcript) {
    if (name == "llm") {
        if (provider == nullptr) throw std::invalid_argument("llm policy requires a provider");
        return std::make_unique<LlmPolicy>(*provider, transcript);
    }
    if (name == "popularity") return std::make_unique<PopularityPolicy>();
    if (name == "random") return std::make_unique<RandomPolicy>();
    if (name == "clairvoyant") return std::make_unique<ClairvoyantPolicy>();
    throw std::invalid_argument("unknown policy '" + name + "'");
}

}  // namespace vfcsim
