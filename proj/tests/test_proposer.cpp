#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/mock_gateway.hpp"
#include "corpusdiff/prompts.hpp"
#include "corpusdiff/proposer.hpp"
#include "corpusdiff/tokenizer.hpp"

using namespace corpusdiff;

namespace {

std::vector<TextSample> pool_of(const std::vector<std::string>& texts, const std::string& label) {
    std::vector<TextSample> out;
    for (size_t i = 0; i < texts.size(); ++i) {
        out.push_back({label + "-" + std::to_string(i + 1), texts[i]});
    }
    return out;
}

Problem tiny_problem() {
    Problem p;
    p.goal = "find the difference";
    p.corpus_a.exploration = {"A", pool_of({"x"}, "A")};
    p.corpus_a.validation = {"A", pool_of({"y"}, "Av")};
    p.corpus_b.exploration = {"B", pool_of({"x"}, "B")};
    p.corpus_b.validation = {"B", pool_of({"y"}, "Bv")};
    return p;
}

// Exhaustive recount of the emitted bundle against the balance bound.
int max_word_imbalance(const PromptBundle& bundle) {
    std::map<std::string, int> diff;
    for (const auto& s : bundle.samples_a) {
        for (auto& w : word_tokens(s.text)) ++diff[w];
    }
    for (const auto& s : bundle.samples_b) {
        for (auto& w : word_tokens(s.text)) --diff[w];
    }
    int worst = 0;
    for (const auto& [w, d] : diff) worst = std::max(worst, std::abs(d));
    return worst;
}

} // namespace

TEST_CASE("identical pools fill to the target") {
    std::vector<std::string> texts;
    for (int i = 0; i < 30; ++i) texts.push_back("the same modest text " + std::to_string(i));
    auto pa = pool_of(texts, "A");
    auto pb = pool_of(texts, "B");
    auto budgeter = TokenBudgeter::estimator();
    PromptBundle bundle = build_prompt(tiny_problem(), pa, pb, budgeter, 0, true);
    CHECK(bundle.samples_a.size() == 25);
    CHECK(bundle.samples_b.size() == 25);
    CHECK(bundle.token_count <= 3200);
    CHECK(max_word_imbalance(bundle) <=
          int(0.25 * bundle.target_samples));
}

TEST_CASE("a sample that would unbalance a word is skipped") {
    // One A-candidate is saturated with "the"; it cannot pair with any B
    // candidate without blowing the per-word bound at S=2 (bound 0.5).
    std::vector<std::string> texts_a = {"the the the the the the the the",
                                        "plain words here", "other plain words"};
    std::vector<std::string> texts_b = {"plain words here", "other plain words",
                                        "more plain words"};
    PromptLimits limits;
    limits.target_samples_per_side = 2;
    auto budgeter = TokenBudgeter::estimator();
    PromptBundle bundle = build_prompt(tiny_problem(), pool_of(texts_a, "A"),
                                       pool_of(texts_b, "B"), budgeter, 1, true, limits);
    for (const auto& s : bundle.samples_a) {
        CHECK(s.text.find("the the") == std::string::npos);
    }
    CHECK(max_word_imbalance(bundle) <= int(0.25 * bundle.target_samples));
}

TEST_CASE("token budget shrinks the sample count") {
    std::string fifty_tokens(200, 'x'); // 200 chars / 4 per token
    std::vector<std::string> texts(30, fifty_tokens);
    // Identical texts keep the balance trivially satisfied; budget dominates.
    PromptLimits limits;
    limits.max_prompt_tokens = 400;
    auto budgeter = TokenBudgeter::estimator();
    PromptBundle bundle = build_prompt(tiny_problem(), pool_of(texts, "A"),
                                       pool_of(texts, "B"), budgeter, 2, true, limits);
    CHECK(bundle.token_count <= 400);
    CHECK(bundle.samples_a.size() < 25);
    CHECK(bundle.samples_a.size() >= 1);

    PromptLimits impossible;
    impossible.max_prompt_tokens = 20;
    CHECK_THROWS_WITH_AS(build_prompt(tiny_problem(), pool_of(texts, "A"),
                                      pool_of(texts, "B"), budgeter, 2, true, impossible),
                         doctest::Contains("sample too large for budget"), Error);
}

TEST_CASE("per-sample truncation applies before assembly") {
    std::string long_text(4096, 'y');
    std::vector<std::string> texts(4, long_text);
    auto budgeter = TokenBudgeter::estimator();
    PromptLimits limits;
    limits.max_sample_tokens = 16;
    PromptBundle bundle = build_prompt(tiny_problem(), pool_of(texts, "A"),
                                       pool_of(texts, "B"), budgeter, 3, true, limits);
    for (const auto& s : bundle.samples_a) CHECK(budgeter.count(s.text) <= 16);
}

TEST_CASE("goal flag swaps in the generic sentence") {
    Problem p = tiny_problem();
    p.goal = "my very specific secret goal";
    auto pa = pool_of({"text one", "text two"}, "A");
    auto pb = pool_of({"text one", "text two"}, "B");
    auto budgeter = TokenBudgeter::estimator();
    PromptBundle with_goal = build_prompt(p, pa, pb, budgeter, 4, true);
    CHECK(with_goal.prompt_text.find("my very specific secret goal") != std::string::npos);
    PromptBundle without_goal = build_prompt(p, pa, pb, budgeter, 4, false);
    CHECK(without_goal.prompt_text.find("secret goal") == std::string::npos);
    CHECK(without_goal.prompt_text.find(prompts::generic_goal_sentence()) != std::string::npos);
}

TEST_CASE("hypothesis list parsing accepts numbered and dashed forms") {
    auto items = parse_hypothesis_list("1. mentions sports\n2) mentions art\n- mentions rain\n"
                                       "* mentions snow\nnot a list line\n\n3. final one");
    REQUIRE(items.size() == 5);
    CHECK(items[0] == "mentions sports");
    CHECK(items[1] == "mentions art");
    CHECK(items[2] == "mentions rain");
    CHECK(items[3] == "mentions snow");
    CHECK(items[4] == "final one");
    CHECK(parse_hypothesis_list("").empty());
    CHECK(parse_hypothesis_list("no list here").empty());
}

TEST_CASE("comparative detection") {
    CHECK(detect_comparative("is more likely to include slang or colloquial terms."));
    CHECK_FALSE(detect_comparative("includes slang or colloquial terms."));
    CHECK_FALSE(detect_comparative("mentions a summer festival"));
    CHECK(detect_comparative("uses bigger words"));
    CHECK(detect_comparative("has the best jokes"));
    CHECK(detect_comparative("contains fewer adjectives"));
    CHECK_FALSE(detect_comparative("talks about a member of the cast"));
}

TEST_CASE("rewriting strips the comparative and keeps provenance") {
    MockGateway mock;
    Hypothesis h;
    h.text = "is more likely to include slang or colloquial terms.";
    auto rewritten = rewrite_comparative(h, mock);
    REQUIRE(rewritten.has_value());
    CHECK(rewritten->text == "includes slang or colloquial terms.");
    CHECK(rewritten->source == HypothesisSource::Rewritten);
    CHECK(rewritten->pre_rewrite_text == h.text);

    Hypothesis plain;
    plain.text = "includes slang";
    CHECK_THROWS_AS(rewrite_comparative(plain, mock), Error);
}

TEST_CASE("a rewrite that stays comparative is dropped") {
    MockGateway mock;
    mock.completion_rules.push_back({"Rewrite the hypothesis", "uses more slang"});
    Hypothesis h;
    h.text = "is more likely to use slang";
    CHECK_FALSE(rewrite_comparative(h, mock).has_value());
}

namespace {

Problem words_problem() {
    std::vector<std::string> texts_a, texts_b;
    for (int i = 0; i < 12; ++i) {
        texts_a.push_back("alpha text about sports game " + std::to_string(i));
        texts_b.push_back("beta text about opera stage " + std::to_string(i));
    }
    Problem p;
    p.goal = "find the planted difference";
    p.corpus_a = split_corpus({"A", pool_of(texts_a, "A")}, 0);
    p.corpus_b = split_corpus({"B", pool_of(texts_b, "B")}, 0);
    return p;
}

} // namespace

TEST_CASE("propose dedups and stops at the quota") {
    MockGateway mock;
    mock.completion_rules.push_back(
        {"Samples from Corpus A", "1. mentions sports\n2. mentions art\n"});
    ProposeOptions opts;
    opts.quota = 2;
    opts.seed = 5;
    auto hyps = propose(words_problem(), mock, opts);
    REQUIRE(hyps.size() == 2);
    CHECK(hyps[0].text == "mentions sports");
    CHECK(hyps[1].text == "mentions art");
    CHECK_FALSE(hyps[0].origin_prompt_id.empty());

    // Quota above the mock's distinct output: returns the distinct set.
    opts.quota = 10;
    auto partial = propose(words_problem(), mock, opts);
    CHECK(partial.size() == 2);
}

TEST_CASE("propose errors when nothing ever parses") {
    MockGateway mock;
    mock.completion_rules.push_back({"Samples from Corpus A", "free text, no list"});
    ProposeOptions opts;
    opts.quota = 5;
    opts.max_prompts = 6;
    CHECK_THROWS_WITH_AS(propose(words_problem(), mock, opts),
                         doctest::Contains("proposer exhausted"), Error);
}

TEST_CASE("empty completions do not stop the loop") {
    MockGateway mock;
    // First percentile prompt yields nothing; later ones produce a list. The
    // needle matches only prompts whose sample block has at least 4 samples
    // (top-100 of 6 exploration samples), distinguishing the percentiles.
    mock.completion_rules.push_back({"4. ", "1. mentions alpha\n"});
    ProposeOptions opts;
    opts.quota = 1;
    auto hyps = propose(words_problem(), mock, opts);
    REQUIRE(hyps.size() == 1);
    CHECK(hyps[0].text == "mentions alpha");
}

TEST_CASE("prompt bundles cycle through the percentiles") {
    MockGateway mock;
    mock.completion_rules.push_back({"Samples from Corpus A", "1. mentions something\n"});
    ProposeOptions opts;
    opts.quota = 50; // unreachable; stagnation ends the loop
    opts.max_prompts = 9;
    PromptTrace trace;
    propose(words_problem(), mock, opts, &trace);
    REQUIRE(trace.bundles.size() >= 3);
    CHECK(trace.bundles[0].percentile == Percentile::Top5);
    CHECK(trace.bundles[1].percentile == Percentile::Top20);
    CHECK(trace.bundles[2].percentile == Percentile::Top100);
}
