#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/hypothesis.hpp"
#include "corpusdiff/prompts.hpp"

namespace corpusdiff {

struct CompletionRequest {
    std::string prompt;
    int max_output_tokens = 512;
    double temperature = 0.0;
    std::vector<std::string> stop_markers;

    bool operator==(const CompletionRequest&) const = default;
};

/// Certainty in [0,1] that a hypothesis holds on a sample.
struct JudgedScore {
    double value = 0.0;
    std::string judge_id;
};

enum class EquivalenceLabel { Equivalent, Similar, Irrelevant };

inline const char* to_string(EquivalenceLabel l) {
    switch (l) {
        case EquivalenceLabel::Equivalent: return "equivalent";
        case EquivalenceLabel::Similar: return "similar";
        default: return "irrelevant";
    }
}

enum class BackendKind { Remote, Mock, Replay };

struct BackendConfig {
    BackendKind kind = BackendKind::Mock;
    std::string endpoint;    // remote only, e.g. http://host:port/v1/chat/completions
    std::string model_name;
    int max_concurrent_requests = 4;
    std::string cache_dir;   // replay source; when set on remote/mock, responses are recorded
    std::string api_key_env = "LM_API_KEY";
    int retry_attempts = 3;
    int retry_initial_delay_ms = 100;
};

/// Language-model access. All four operations are deterministic under the
/// mock and replay backends. Implementations are safe for concurrent use.
class Gateway {
public:
    virtual ~Gateway() = default;

    virtual std::string complete(const CompletionRequest& request) = 0;

    /// Scores via the truth prompt by default; backends that expose answer
    /// likelihoods may override and return fractional values.
    virtual JudgedScore judge_truth(const Hypothesis& hypothesis, const TextSample& sample);

    virtual EquivalenceLabel judge_equivalence(const std::string& candidate,
                                               const std::string& reference);

    virtual int rate_rubric(const std::string& goal, const Hypothesis& hypothesis,
                            RubricKind rubric);

    virtual std::string id() const = 0;
};

// Output parsing shared by backends. All throw UnparseableOutput on failure.
double parse_truth_output(const std::string& raw);
EquivalenceLabel parse_equivalence_output(const std::string& raw);
int parse_rubric_output(const std::string& raw);

/// Chat-completion HTTP backend. POSTs {model, messages, temperature,
/// max_tokens} and reads the first choice; credentials come from the
/// environment variable named in the config. Transport failures are retried
/// with doubling delay before surfacing as retryable errors.
class RemoteGateway : public Gateway {
public:
    explicit RemoteGateway(BackendConfig config);
    ~RemoteGateway() override;

    std::string complete(const CompletionRequest& request) override;
    std::string id() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Record/replay wrapper. Each request is keyed by a content hash; responses
/// live one-per-file under the cache directory. With a delegate it records;
/// without one it replays and a missing key is an error.
class RecordReplayGateway : public Gateway {
public:
    RecordReplayGateway(std::shared_ptr<Gateway> delegate, std::filesystem::path cache_dir);

    std::string complete(const CompletionRequest& request) override;
    JudgedScore judge_truth(const Hypothesis& hypothesis, const TextSample& sample) override;
    EquivalenceLabel judge_equivalence(const std::string& candidate,
                                       const std::string& reference) override;
    int rate_rubric(const std::string& goal, const Hypothesis& hypothesis,
                    RubricKind rubric) override;
    std::string id() const override;

    static std::string cache_key(const std::string& op, const nlohmann::ordered_json& fields);

private:
    nlohmann::json fetch_or_record(const std::string& key,
                                   const std::function<nlohmann::json()>& produce);

    std::shared_ptr<Gateway> delegate_;
    std::filesystem::path dir_;
    mutable std::mutex mutex_;
};

/// Builds the backend described by the config, including the record/replay
/// wrapper when a cache directory is set.
std::shared_ptr<Gateway> make_gateway(const BackendConfig& config);

} // namespace corpusdiff
