#include "corpusdiff/gateway.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/mock_gateway.hpp"
#include "corpusdiff/util.hpp"

namespace corpusdiff {

namespace {

std::string first_word(const std::string& raw) {
    std::string w;
    for (char ch : raw) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            w.push_back(char(std::tolower(c)));
        } else if (!w.empty()) {
            break;
        }
    }
    return w;
}

} // namespace

double parse_truth_output(const std::string& raw) {
    std::string w = first_word(raw);
    if (w == "yes") return 1.0;
    if (w == "no") return 0.0;
    throw UnparseableOutput("unparseable truth judgment", raw);
}

EquivalenceLabel parse_equivalence_output(const std::string& raw) {
    std::string w = first_word(raw);
    if (w == "yes") return EquivalenceLabel::Equivalent;
    if (w == "related") return EquivalenceLabel::Similar;
    if (w == "no") return EquivalenceLabel::Irrelevant;
    throw UnparseableOutput("unparseable verdict", raw);
}

int parse_rubric_output(const std::string& raw) {
    for (char c : raw) {
        if (c == '0' || c == '1' || c == '2') return c - '0';
        if (std::isdigit(static_cast<unsigned char>(c)))
            throw UnparseableOutput("rubric rating out of range", raw);
    }
    throw UnparseableOutput("unparseable rubric rating", raw);
}

JudgedScore Gateway::judge_truth(const Hypothesis& hypothesis, const TextSample& sample) {
    CompletionRequest req;
    req.prompt = prompts::render_truth(hypothesis.text, sample.text);
    req.max_output_tokens = 4;
    req.temperature = 0.0;
    std::string raw = complete(req);
    return {parse_truth_output(raw), id()};
}

EquivalenceLabel Gateway::judge_equivalence(const std::string& candidate,
                                            const std::string& reference) {
    if (candidate.empty() || reference.empty())
        throw Error("judge_equivalence: empty predicate");
    CompletionRequest req;
    req.prompt = prompts::render_equivalence(candidate, reference);
    req.max_output_tokens = 4;
    req.temperature = 0.0;
    return parse_equivalence_output(complete(req));
}

int Gateway::rate_rubric(const std::string& goal, const Hypothesis& hypothesis,
                         RubricKind rubric) {
    CompletionRequest req;
    req.prompt = prompts::render_rubric(rubric, goal, hypothesis.text);
    req.max_output_tokens = 4;
    req.temperature = 0.0;
    return parse_rubric_output(complete(req));
}

// ---------------------------------------------------------------------------
// Remote backend

struct RemoteGateway::Impl {
    BackendConfig config;
    std::string host_base;  // scheme://host:port
    std::string path;
    std::string api_key;
    std::counting_semaphore<1 << 20> slots{1};

    explicit Impl(BackendConfig cfg) : config(std::move(cfg)), slots(config.max_concurrent_requests) {
        if (config.endpoint.empty()) throw Error("remote backend requires an endpoint");
        if (config.max_concurrent_requests < 1)
            throw Error("max_concurrent_requests must be >= 1");
        auto scheme_end = config.endpoint.find("://");
        if (scheme_end == std::string::npos)
            throw Error("endpoint must include a scheme: " + config.endpoint);
        auto path_start = config.endpoint.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            host_base = config.endpoint;
            path = "/";
        } else {
            host_base = config.endpoint.substr(0, path_start);
            path = config.endpoint.substr(path_start);
        }
        // An empty api_key_env opts out (e.g. a local unauthenticated server).
        if (!config.api_key_env.empty()) {
            const char* key = std::getenv(config.api_key_env.c_str());
            if (!key)
                throw Error("remote backend requires credentials: environment variable " +
                            config.api_key_env + " is not set");
            api_key = key;
        }
    }
};

RemoteGateway::RemoteGateway(BackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteGateway::~RemoteGateway() = default;

std::string RemoteGateway::id() const {
    return "remote:" + impl_->config.model_name;
}

std::string RemoteGateway::complete(const CompletionRequest& request) {
    if (request.prompt.empty()) throw Error("complete: empty prompt");
    if (request.max_output_tokens <= 0) throw Error("complete: max_output_tokens must be > 0");

    nlohmann::ordered_json body;
    body["model"] = impl_->config.model_name;
    body["messages"] = nlohmann::ordered_json::array(
        {{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_output_tokens;
    if (!request.stop_markers.empty()) body["stop"] = request.stop_markers;
    const std::string payload = body.dump();

    impl_->slots.acquire();
    struct Release {
        Impl* impl;
        ~Release() { impl->slots.release(); }
    } release{impl_.get()};

    int delay_ms = impl_->config.retry_initial_delay_ms;
    std::string last_error;
    for (int attempt = 0; attempt < impl_->config.retry_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= 2;
        }
        httplib::Client client(impl_->host_base);
        client.set_connection_timeout(10);
        client.set_read_timeout(120);
        httplib::Headers headers;
        if (!impl_->api_key.empty())
            headers.emplace("Authorization", "Bearer " + impl_->api_key);
        auto res = client.Post(impl_->path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "http status " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500 && res->status != 429) break;
            continue;
        }
        auto j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded()) {
            last_error = "malformed response body";
            continue;
        }
        if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
            const auto& choice = j["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content"))
                return choice["message"]["content"].get<std::string>();
            if (choice.contains("text")) return choice["text"].get<std::string>();
        }
        if (j.contains("content") && j["content"].is_string())
            return j["content"].get<std::string>();
        last_error = "response missing completion text";
        break;
    }
    throw GatewayError("remote completion failed: " + last_error, true);
}

// ---------------------------------------------------------------------------
// Record/replay

RecordReplayGateway::RecordReplayGateway(std::shared_ptr<Gateway> delegate,
                                         std::filesystem::path cache_dir)
    : delegate_(std::move(delegate)), dir_(std::move(cache_dir)) {
    std::filesystem::create_directories(dir_);
}

std::string RecordReplayGateway::cache_key(const std::string& op,
                                           const nlohmann::ordered_json& fields) {
    nlohmann::ordered_json j;
    j["op"] = op;
    j["fields"] = fields;
    return sha256_hex(j.dump());
}

nlohmann::json RecordReplayGateway::fetch_or_record(
    const std::string& key, const std::function<nlohmann::json()>& produce) {
    const auto path = dir_ / key;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (std::filesystem::exists(path)) {
            return nlohmann::json::parse(read_file(path));
        }
    }
    if (!delegate_) throw CacheMissError("replay cache miss: " + key);
    nlohmann::json response = produce();
    std::lock_guard<std::mutex> lock(mutex_);
    if (!std::filesystem::exists(path)) write_file(path, response.dump());
    return response;
}

std::string RecordReplayGateway::complete(const CompletionRequest& request) {
    nlohmann::ordered_json fields;
    fields["prompt"] = request.prompt;
    fields["max_output_tokens"] = request.max_output_tokens;
    fields["temperature"] = request.temperature;
    fields["stop_markers"] = request.stop_markers;
    auto key = cache_key("complete", fields);
    auto j = fetch_or_record(key, [&] {
        return nlohmann::json{{"text", delegate_->complete(request)}};
    });
    return j.at("text").get<std::string>();
}

JudgedScore RecordReplayGateway::judge_truth(const Hypothesis& hypothesis,
                                             const TextSample& sample) {
    nlohmann::ordered_json fields;
    fields["hypothesis"] = hypothesis.text;
    fields["sample"] = sample.text;
    auto key = cache_key("judge_truth", fields);
    auto j = fetch_or_record(key, [&] {
        JudgedScore s = delegate_->judge_truth(hypothesis, sample);
        return nlohmann::json{{"value", s.value}, {"judge_id", s.judge_id}};
    });
    return {j.at("value").get<double>(), j.at("judge_id").get<std::string>()};
}

EquivalenceLabel RecordReplayGateway::judge_equivalence(const std::string& candidate,
                                                        const std::string& reference) {
    nlohmann::ordered_json fields;
    fields["candidate"] = candidate;
    fields["reference"] = reference;
    auto key = cache_key("judge_equivalence", fields);
    auto j = fetch_or_record(key, [&] {
        return nlohmann::json{{"label", to_string(delegate_->judge_equivalence(candidate, reference))}};
    });
    auto label = j.at("label").get<std::string>();
    if (label == "equivalent") return EquivalenceLabel::Equivalent;
    if (label == "similar") return EquivalenceLabel::Similar;
    return EquivalenceLabel::Irrelevant;
}

int RecordReplayGateway::rate_rubric(const std::string& goal, const Hypothesis& hypothesis,
                                     RubricKind rubric) {
    nlohmann::ordered_json fields;
    fields["goal"] = goal;
    fields["hypothesis"] = hypothesis.text;
    fields["rubric"] = to_string(rubric);
    auto key = cache_key("rate_rubric", fields);
    auto j = fetch_or_record(key, [&] {
        return nlohmann::json{{"rating", delegate_->rate_rubric(goal, hypothesis, rubric)}};
    });
    return j.at("rating").get<int>();
}

std::string RecordReplayGateway::id() const {
    if (delegate_) return "record:" + delegate_->id();
    return "replay";
}

std::shared_ptr<Gateway> make_gateway(const BackendConfig& config) {
    if (config.max_concurrent_requests < 1)
        throw Error("max_concurrent_requests must be >= 1");
    switch (config.kind) {
        case BackendKind::Replay:
            if (config.cache_dir.empty()) throw Error("replay backend requires cache_dir");
            return std::make_shared<RecordReplayGateway>(nullptr, config.cache_dir);
        case BackendKind::Remote: {
            auto remote = std::make_shared<RemoteGateway>(config);
            if (!config.cache_dir.empty())
                return std::make_shared<RecordReplayGateway>(remote, config.cache_dir);
            return remote;
        }
        case BackendKind::Mock:
        default: {
            auto mock = std::make_shared<MockGateway>();
            if (!config.cache_dir.empty())
                return std::make_shared<RecordReplayGateway>(mock, config.cache_dir);
            return mock;
        }
    }
}

} // namespace corpusdiff
