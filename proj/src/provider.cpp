#include "vfcsim/provider.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "vfcsim/rng.hpp"

namespace vfcsim {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Pulls "Key: <json>" lines back out of the rendered Data section.
nlohmann::json parse_data_line(const std::string& info_text, const std::string& key) {
    const std::string prefix = key + ": ";
    std::istringstream is(info_text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind(prefix, 0) == 0) {
            return nlohmann::json::parse(line.substr(prefix.size()));
        }
    }
    throw std::runtime_error("prompt data section is missing '" + key + "'");
}

std::vector<std::string> split_genres(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find('|', pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

}  // namespace

ProviderKind provider_kind_from_string(const std::string& s) {
    if (s == "mock") return ProviderKind::mock;
    if (s == "recorded") return ProviderKind::recorded;
    if (s == "http") return ProviderKind::http;
    throw std::invalid_argument("unknown provider kind '" + s + "'");
}

const char* to_string(ProviderKind k) {
    switch (k) {
        case ProviderKind::mock: return "mock";
        case ProviderKind::recorded: return "recorded";
        case ProviderKind::http: return "http";
    }
    return "?";
}

void ProviderSpec::validate() const {
    if (kind == ProviderKind::http) {
        if (endpoint.empty()) throw std::invalid_argument("http provider requires an endpoint");
        if (api_key_env.empty() || std::getenv(api_key_env.c_str()) == nullptr) {
            throw std::invalid_argument("http provider requires the API key environment variable '" +
                                        api_key_env + "' to be set");
        }
    }
    if (kind == ProviderKind::recorded && store_path.empty()) {
        throw std::invalid_argument("recorded provider requires a transcript store path");
    }
}

// ---------------------------------------------------------------------------
// Mock provider

ProviderCall MockProvider::complete(const PromptBundle& prompt, int /*round*/) {
    const double t0 = now_ms();
    ProviderCall call;
    ProviderAttempt attempt;
    attempt.request = {{"provider", "mock"}, {"prompt_digest", prompt.digest()}};
    try {
        const nlohmann::json caps = parse_data_line(prompt.info_text, "Cache capacities");
        const nlohmann::json profiles = parse_data_line(prompt.info_text, "User profiles");
        const nlohmann::json history = parse_data_line(prompt.info_text, "History");
        const nlohmann::json types = parse_data_line(prompt.info_text, "Movie types");
        const int total_slots = caps.at("total_slots").get<int>();

        // Demographic block of each user: (age, gender, occupation) as rendered.
        std::unordered_map<int, std::string> block_of_user;
        for (const auto& p : profiles) {
            block_of_user[p.at(0).get<int>()] = p.at(1).get<std::string>() + "/" +
                                                p.at(2).get<std::string>() + "/" +
                                                p.at(3).get<std::string>();
        }
        std::unordered_map<int, std::vector<std::string>> genres_of;
        for (const auto& t : types) {
            genres_of[t.at(0).get<int>()] = split_genres(t.at(1).get<std::string>());
        }

        // Mean rating per (block, genre) over the rendered history.
        std::map<std::pair<std::string, std::string>, std::pair<double, int>> block_genre;
        for (const auto& h : history) {
            const int user = h.at(0).get<int>();
            const int content = h.at(1).get<int>();
            const double rating = h.at(2).get<double>();
            auto bit = block_of_user.find(user);
            auto git = genres_of.find(content);
            if (bit == block_of_user.end() || git == genres_of.end()) continue;
            for (const std::string& g : git->second) {
                auto& acc = block_genre[{bit->second, g}];
                acc.first += rating;
                acc.second += 1;
            }
        }

        // score(f) = sum over users of the mean rating of f's genres within
        // the user's demographic block.
        std::vector<std::pair<double, int>> scored;
        scored.reserve(genres_of.size());
        for (const auto& [f, genres] : genres_of) {
            double score = 0.0;
            for (const auto& [user, block] : block_of_user) {
                double sum = 0.0;
                int n = 0;
                for (const std::string& g : genres) {
                    auto it = block_genre.find({block, g});
                    if (it != block_genre.end() && it->second.second > 0) {
                        sum += it->second.first / it->second.second;
                        ++n;
                    }
                }
                if (n > 0) score += sum / n;
            }
            scored.emplace_back(score, f);
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        std::vector<int> ids;
        const std::size_t want = std::min<std::size_t>(scored.size(),
                                                       static_cast<std::size_t>(std::max(0, total_slots)));
        ids.reserve(want);
        for (std::size_t k = 0; k < want; ++k) ids.push_back(scored[k].second);

        attempt.response_text =
            "Ranked placement list based on the provided profiles, history and types:\n" +
            render_id_list(ids);
        attempt.latency_ms = now_ms() - t0;
        call.ok = true;
        call.response_text = attempt.response_text;
    } catch (const std::exception& e) {
        attempt.error = std::string("mock provider could not parse prompt data: ") + e.what();
        attempt.latency_ms = now_ms() - t0;
        call.error = attempt.error;
    }
    call.attempts.push_back(std::move(attempt));
    return call;
}

// ---------------------------------------------------------------------------
// Recorded provider

RecordedProvider::RecordedProvider(const std::string& store_path) : store_path_(store_path) {
    std::ifstream in(store_path_);
    if (!in) throw std::runtime_error("cannot open transcript store " + store_path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("prompt_digest") || !j.contains("response")) continue;
        if (j.contains("outcome") && j.at("outcome").get<std::string>() != "ok") continue;
        std::uint64_t digest = 0;
        if (j.at("prompt_digest").is_string()) {
            digest = std::stoull(j.at("prompt_digest").get<std::string>(), nullptr, 16);
        } else {
            digest = j.at("prompt_digest").get<std::uint64_t>();
        }
        responses_[digest] = j.at("response").get<std::string>();
    }
}

ProviderCall RecordedProvider::complete(const PromptBundle& prompt, int /*round*/) {
    const double t0 = now_ms();
    ProviderCall call;
    ProviderAttempt attempt;
    const std::uint64_t digest = prompt.digest();
    attempt.request = {{"provider", "recorded"}, {"prompt_digest", digest}, {"store", store_path_}};
    auto it = responses_.find(digest);
    if (it == responses_.end()) {
        attempt.error = "transcript miss for prompt digest";
        call.error = attempt.error;
    } else {
        attempt.response_text = it->second;
        call.ok = true;
        call.response_text = it->second;
    }
    attempt.latency_ms = now_ms() - t0;
    call.attempts.push_back(std::move(attempt));
    return call;
}

// ---------------------------------------------------------------------------
// HTTP provider

HttpProvider::HttpProvider(ProviderSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

ProviderCall HttpProvider::complete(const PromptBundle& prompt, int /*round*/) {
    ProviderCall call;

    // endpoint = scheme://host[:port][/path]
    std::string base = spec_.endpoint;
    std::string path = "/v1/chat/completions";
    const std::size_t scheme = base.find("://");
    if (scheme != std::string::npos) {
        const std::size_t slash = base.find('/', scheme + 3);
        if (slash != std::string::npos) {
            path = base.substr(slash);
            base = base.substr(0, slash);
        }
    }

    nlohmann::json body;
    body["model"] = spec_.model;
    body["temperature"] = spec_.temperature;
    body["messages"] = {{{"role", "system"}, {"content", prompt.role_text}},
                        {{"role", "user"},
                         {"content", prompt.task_text + "\n\n" + prompt.info_text}}};
    const std::string payload = body.dump();

    const char* key = std::getenv(spec_.api_key_env.c_str());

    for (int attempt_no = 0; attempt_no <= spec_.max_retries; ++attempt_no) {
        ProviderAttempt attempt;
        attempt.request = {{"provider", "http"}, {"endpoint", spec_.endpoint},
                           {"model", spec_.model}, {"temperature", spec_.temperature},
                           {"attempt", attempt_no + 1}, {"body", body}};
        const double t0 = now_ms();

        httplib::Client client(base);
        client.set_connection_timeout(0, spec_.timeout_ms * 1000);
        client.set_read_timeout(spec_.timeout_ms / 1000, (spec_.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (key != nullptr) headers.emplace("Authorization", std::string("Bearer ") + key);

        auto res = client.Post(path, headers, payload, "application/json");
        attempt.latency_ms = now_ms() - t0;

        if (!res) {
            attempt.error = "transport error: " + httplib::to_string(res.error());
        } else if (res->status == 200) {
            nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
            if (!j.is_discarded() && j.contains("choices") && !j["choices"].empty() &&
                j["choices"][0].contains("message")) {
                attempt.response_text = j["choices"][0]["message"].value("content", "");
                call.ok = true;
                call.response_text = attempt.response_text;
                call.attempts.push_back(std::move(attempt));
                return call;
            }
            attempt.error = "malformed completion response";
        } else {
            attempt.error = "http status " + std::to_string(res->status);
        }
        call.error = attempt.error;
        call.attempts.push_back(std::move(attempt));
        if (attempt_no < spec_.max_retries) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100 * (attempt_no + 1)));
        }
    }
    return call;
}

std::unique_ptr<Provider> make_provider(const ProviderSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case ProviderKind::mock: return std::make_unique<MockProvider>(spec.seed);
        case ProviderKind::recorded: return std::make_unique<RecordedProvider>(spec.store_path);
        case ProviderKind::http: return std::make_unique<HttpProvider>(spec);
    }
    throw std::logic_error("unreachable provider kind");
}

// ---------------------------------------------------------------------------
// Transcripts

TranscriptLog::TranscriptLog(std::string path) : path_(std::move(path)) {}

void TranscriptLog::append(int round, std::uint64_t prompt_digest, const ProviderAttempt& attempt,
                           const std::string& outcome) {
    char digest_hex[17];
    std::snprintf(digest_hex, sizeof digest_hex, "%016llx",
                  static_cast<unsigned long long>(prompt_digest));
    nlohmann::json rec;
    rec["round"] = round;
    rec["prompt_digest"] = digest_hex;
    rec["request"] = attempt.request;
    rec["response"] = attempt.response_text;
    rec["latency_ms"] = attempt.latency_ms;
    rec["outcome"] = outcome;

    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to transcript " + path_);
    out << rec.dump() << "\n";
}

RankOutcome rank_with_provider(const PromptBundle& prompt, Provider& provider, int round,
                               TranscriptLog* transcript) {
    RankOutcome out;
    out.call = provider.complete(prompt, round);

    if (transcript) {
        const std::uint64_t digest = prompt.digest();
        for (std::size_t k = 0; k < out.call.attempts.size(); ++k) {
            const ProviderAttempt& a = out.call.attempts[k];
            const bool last = k + 1 == out.call.attempts.size();
            std::string outcome = a.error.empty() ? "ok" : "error: " + a.error;
            if (!last && !a.error.empty()) outcome = "retry: " + a.error;
            transcript->append(round, digest, a, outcome);
        }
    }

    if (!out.call.ok) {
        out.error = out.call.error.empty() ? "provider failed" : out.call.error;
        return out;
    }
    std::string parse_error;
    auto list = parse_ranked_list(out.call.response_text, &parse_error);
    if (!list) {
        out.error = parse_error;
        return out;
    }
    out.ok = true;
    out.list = std::move(*list);
    return out;
}

}  // namespace vfcsim
