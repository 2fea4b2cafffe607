#include <doctest.h>

#include <filesystem>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/gateway.hpp"
#include "corpusdiff/mock_gateway.hpp"
#include "corpusdiff/util.hpp"

using namespace corpusdiff;
namespace fs = std::filesystem;

TEST_CASE("truth judging follows keyword rules") {
    MockGateway mock;
    mock.truth_rules.push_back({"mentions sports", {"basketball", "football", "sports"}});
    Hypothesis h;
    h.text = "mentions sports";
    CHECK(mock.judge_truth(h, {"s1", "the basketball game"}).value == 1.0);
    CHECK(mock.judge_truth(h, {"s2", "the recipe for soup"}).value == 0.0);
}

TEST_CASE("answer likelihoods normalize to the affirmative weight") {
    MockGateway mock;
    mock.constant_truth_weights = {{0.8, 0.2}};
    Hypothesis h;
    h.text = "anything";
    CHECK(mock.judge_truth(h, {"s", "any text"}).value == doctest::Approx(0.8));
}

TEST_CASE("unparseable judgments raise with the raw text") {
    MockGateway mock;
    mock.unparseable_hypotheses.insert("weird predicate");
    Hypothesis h;
    h.text = "weird predicate";
    CHECK_THROWS_AS(mock.judge_truth(h, {"s", "text"}), UnparseableOutput);
}

TEST_CASE("equivalence verdicts map yes/related/no") {
    CHECK(parse_equivalence_output("yes") == EquivalenceLabel::Equivalent);
    CHECK(parse_equivalence_output(" Yes.") == EquivalenceLabel::Equivalent);
    CHECK(parse_equivalence_output("related") == EquivalenceLabel::Similar);
    CHECK(parse_equivalence_output("No") == EquivalenceLabel::Irrelevant);
    CHECK_THROWS_AS(parse_equivalence_output("maybe"), UnparseableOutput);
}

TEST_CASE("identity equivalence judge") {
    MockGateway mock;
    CHECK(mock.judge_equivalence("has a topic of sports", "has a topic of sports") ==
          EquivalenceLabel::Equivalent);
    CHECK(mock.judge_equivalence("Has a topic of sports.", "has a topic of sports") ==
          EquivalenceLabel::Equivalent);
    CHECK(mock.judge_equivalence("has a named language of Korean",
                                 "has a named language of Japanese") !=
          EquivalenceLabel::Equivalent);
    CHECK_THROWS_AS(mock.judge_equivalence("", "x"), Error);
}

TEST_CASE("overlap mode grants similar verdicts") {
    MockGateway mock;
    mock.similar_overlap_threshold = 0.5;
    CHECK(mock.judge_equivalence("has a topic of winter sports",
                                 "has a topic of sports") == EquivalenceLabel::Similar);
    CHECK(mock.judge_equivalence("has a named language of Korean",
                                 "uses archaic and poetic diction") ==
          EquivalenceLabel::Irrelevant);
}

TEST_CASE("rubric ratings come from the table with a constant fallback") {
    MockGateway mock;
    mock.rubric_by_hypothesis = {{"write in first person", 2}, {"argue for abortion", 0}};
    Hypothesis relevant, irrelevant, other;
    relevant.text = "write in first person";
    irrelevant.text = "argue for abortion";
    other.text = "anything else";
    std::string goal = "understand what writing style is convincing";
    CHECK(mock.rate_rubric(goal, relevant, RubricKind::Relevance) == 2);
    CHECK(mock.rate_rubric(goal, irrelevant, RubricKind::Relevance) == 0);
    CHECK(mock.rate_rubric(goal, other, RubricKind::Relevance) == 1);
}

TEST_CASE("rubric parsing accepts a single digit only") {
    CHECK(parse_rubric_output("2") == 2);
    CHECK(parse_rubric_output("Rating: 1") == 1);
    CHECK_THROWS_AS(parse_rubric_output("7"), UnparseableOutput);
    CHECK_THROWS_AS(parse_rubric_output("none"), UnparseableOutput);
}

TEST_CASE("mock completions are deterministic") {
    MockGateway mock;
    mock.completion_rules.push_back({"marker", "1. canned answer\n"});
    CompletionRequest req;
    req.prompt = "prompt with marker inside";
    CHECK(mock.complete(req) == mock.complete(req));
    CHECK(mock.complete(req) == "1. canned answer\n");
}

TEST_CASE("record then replay returns identical responses") {
    auto dir = fs::temp_directory_path() / "corpusdiff_test_cache";
    fs::remove_all(dir);

    auto mock = std::make_shared<MockGateway>();
    mock->completion_rules.push_back({"question", "the recorded answer"});
    RecordReplayGateway recorder(mock, dir);

    CompletionRequest req;
    req.prompt = "a question to record";
    std::string recorded = recorder.complete(req);
    CHECK(recorded == "the recorded answer");

    Hypothesis h;
    h.text = "mentions cats";
    JudgedScore score = recorder.judge_truth(h, {"s", "a cat and a dog"});

    RecordReplayGateway replayer(nullptr, dir);
    CHECK(replayer.complete(req) == recorded);
    CHECK(replayer.judge_truth(h, {"s", "a cat and a dog"}).value == score.value);

    CompletionRequest other = req;
    other.temperature = 0.9; // any field change misses the cache
    CHECK_THROWS_AS(replayer.complete(other), CacheMissError);
}

TEST_CASE("cache keys cover every request field") {
    CompletionRequest base;
    base.prompt = "p";
    base.max_output_tokens = 10;
    base.temperature = 0.5;
    base.stop_markers = {"x"};

    auto key_of = [](const CompletionRequest& r) {
        nlohmann::ordered_json fields;
        fields["prompt"] = r.prompt;
        fields["max_output_tokens"] = r.max_output_tokens;
        fields["temperature"] = r.temperature;
        fields["stop_markers"] = r.stop_markers;
        return RecordReplayGateway::cache_key("complete", fields);
    };
    std::string k0 = key_of(base);
    auto r1 = base;
    r1.prompt = "q";
    auto r2 = base;
    r2.max_output_tokens = 11;
    auto r3 = base;
    r3.temperature = 0.6;
    auto r4 = base;
    r4.stop_markers = {"y"};
    CHECK(key_of(r1) != k0);
    CHECK(key_of(r2) != k0);
    CHECK(key_of(r3) != k0);
    CHECK(key_of(r4) != k0);
    CHECK(key_of(base) == k0);
}

TEST_CASE("remote backend errors as retryable when unreachable") {
    BackendConfig config;
    config.kind = BackendKind::Remote;
    config.endpoint = "http://127.0.0.1:1/v1/chat/completions"; // nothing listens here
    config.model_name = "m";
    config.retry_attempts = 2;
    config.retry_initial_delay_ms = 1;
    config.api_key_env = ""; // local server, no credentials
    RemoteGateway remote(config);
    CompletionRequest req;
    req.prompt = "hello";
    try {
        remote.complete(req);
        FAIL("expected GatewayError");
    } catch (const GatewayError& e) {
        CHECK(e.retryable());
    }
}

TEST_CASE("remote backend refuses to start without credentials") {
    BackendConfig config;
    config.kind = BackendKind::Remote;
    config.endpoint = "http://127.0.0.1:9/v1/chat/completions";
    config.api_key_env = "CORPUSDIFF_TEST_KEY_THAT_IS_NOT_SET";
    CHECK_THROWS_WITH_AS(RemoteGateway{config}, doctest::Contains("credentials"), Error);
}

TEST_CASE("make_gateway wires kinds and validates limits") {
    BackendConfig mock_config;
    mock_config.kind = BackendKind::Mock;
    CHECK(make_gateway(mock_config)->id() == "mock");

    BackendConfig bad = mock_config;
    bad.max_concurrent_requests = 0;
    CHECK_THROWS_AS(make_gateway(bad), Error);

    BackendConfig replay;
    replay.kind = BackendKind::Replay;
    CHECK_THROWS_AS(make_gateway(replay), Error); // needs cache_dir
}
