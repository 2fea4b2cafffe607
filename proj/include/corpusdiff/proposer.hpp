#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/gateway.hpp"
#include "corpusdiff/hypothesis.hpp"
#include "corpusdiff/scoring.hpp"
#include "corpusdiff/tokenizer.hpp"

namespace corpusdiff {

struct PromptLimits {
    int max_prompt_tokens = 3200;
    int max_sample_tokens = 256;
    int target_samples_per_side = 25;
    double balance_factor = 0.25;
};

struct PromptBundle {
    std::string id; // content hash prefix
    std::string prompt_text;
    std::vector<TextSample> samples_a;
    std::vector<TextSample> samples_b;
    Percentile percentile = Percentile::Top100;
    int token_count = 0;
    int target_samples = 0; // the S the balance bound 0.25*S was built against
};

/// Assembles a proposer prompt from the two candidate pools. Samples are
/// added in pairs (one per side, seeded order) and a pair is admitted only if
/// afterwards no word occurs more than 0.25*S times more often on one side
/// than the other. Each sample is truncated to the per-sample token cap. S
/// starts at the configured target and shrinks until the rendered prompt fits
/// the total budget; S hitting zero is an error.
PromptBundle build_prompt(const Problem& problem, const std::vector<TextSample>& pool_a,
                          const std::vector<TextSample>& pool_b,
                          const TokenBudgeter& budgeter, uint64_t seed, bool include_goal,
                          const PromptLimits& limits = {});

// Numbered ("1. ...") and dashed ("- ...") list items from a completion.
std::vector<std::string> parse_hypothesis_list(const std::string& completion);

struct ProposeOptions {
    int quota = 60;
    int max_prompts = 50;
    int stagnation_limit = 3; // consecutive prompts yielding nothing new
    uint64_t seed = 0;
    bool include_goal = true;
    double temperature = 0.7;
    int max_output_tokens = 512;
    PromptLimits limits;
};

struct PromptTrace {
    std::vector<PromptBundle> bundles;
};

/// Samples hypotheses until the quota of distinct texts is met, cycling
/// prompt pools through the top-5/top-20/top-100 percentiles with fresh
/// seeds. Exact-duplicate strings are dropped; each hypothesis records the
/// prompt it came from. Stops early once prompts stop producing new texts;
/// it is an error when no hypothesis at all could be parsed.
std::vector<Hypothesis> propose(const Problem& problem, Gateway& gateway,
                                const ProposeOptions& options,
                                PromptTrace* trace = nullptr);

/// True when the text carries a comparative marker: a standalone
/// more/less/fewer/most/least, or an -er/-est token from the built-in
/// comparative lexicon.
bool detect_comparative(const std::string& hypothesis_text);
inline bool detect_comparative(const Hypothesis& h) { return detect_comparative(h.text); }

/// Rewrites a comparative hypothesis into a per-sample predicate via the
/// gateway. Returns nullopt when two attempts still leave a comparative (the
/// caller drops the hypothesis). Precondition: detect_comparative(h).
std::optional<Hypothesis> rewrite_comparative(const Hypothesis& h, Gateway& gateway);

} // namespace corpusdiff
