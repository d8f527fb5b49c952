#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "vfcsim/decision.hpp"
#include "vfcsim/prompt.hpp"

namespace vfcsim {

enum class ProviderKind { mock, recorded, http };

ProviderKind provider_kind_from_string(const std::string& s);
const char* to_string(ProviderKind k);

struct ProviderSpec {
    ProviderKind kind = ProviderKind::mock;
    std::string endpoint;       // http kind: full URL of a chat-completions endpoint
    std::string model;
    double temperature = 0.0;
    int timeout_ms = 30000;
    int max_retries = 2;        // retries after the first attempt
    std::string api_key_env = "VFCSIM_API_KEY";
    std::string store_path;     // recorded kind: transcript JSONL to replay
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument on bad combinations
};

struct ProviderAttempt {
    nlohmann::json request;
    std::string response_text;
    std::string error;  // empty on success
    double latency_ms = 0.0;
};

struct ProviderCall {
    bool ok = false;
    std::string response_text;
    std::string error;
    std::vector<ProviderAttempt> attempts;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual std::string name() const = 0;
    virtual ProviderCall complete(const PromptBundle& prompt, int round) = 0;
};

// Deterministic offline stand-in: parses the prompt's Data section back out
// and ranks candidates by persona-weighted genre affinity, so its output is a
// pure function of the prompt text.
class MockProvider : public Provider {
public:
    explicit MockProvider(std::uint64_t seed = 0) : seed_(seed) {}
    std::string name() const override { return "mock"; }
    ProviderCall complete(const PromptBundle& prompt, int round) override;

private:
    std::uint64_t seed_;
};

// Replays responses captured in a transcript JSONL, keyed by prompt digest.
class RecordedProvider : public Provider {
public:
    explicit RecordedProvider(const std::string& store_path);
    std::string name() const override { return "recorded"; }
    ProviderCall complete(const PromptBundle& prompt, int round) override;

private:
    std::string store_path_;
    std::unordered_map<std::uint64_t, std::string> responses_;
};

// Chat-completions transport over cpp-httplib with bounded retries. The API
// key is read from the environment variable named in api_key_env and never
// written to transcripts.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderSpec spec);
    std::string name() const override { return "http"; }
    ProviderCall complete(const PromptBundle& prompt, int round) override;

private:
    ProviderSpec spec_;
};

std::unique_ptr<Provider> make_provider(const ProviderSpec& spec);

// Append-only JSONL transcript; one record per provider attempt.
class TranscriptLog {
public:
    explicit TranscriptLog(std::string path);

    void append(int round, std::uint64_t prompt_digest, const ProviderAttempt& attempt,
                const std::string& outcome);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::mutex mutex_;
};

struct RankOutcome {
    bool ok = false;
    RankedList list;
    std::string error;
    ProviderCall call;
};

// Provider call + response parsing + transcript logging. A failed call or an
// unparseable response comes back as a typed failure so the caller can apply
// its fallback policy.
RankOutcome rank_with_provider(const PromptBundle& prompt, Provider& provider, int round,
                               TranscriptLog* transcript);

}  // namespace vfcsim
