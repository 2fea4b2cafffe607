#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corpusdiff/gateway.hpp"

namespace corpusdiff {

/// Deterministic rule-based backend for offline runs and tests. All
/// operations are pure functions of their inputs, so results do not depend on
/// call order or concurrency.
///
/// complete() understands two prompt layouts out of the box:
///  - the standard proposer layout, answered by listing predicates from the
///    built-in synthetic dimension inventory that match the shown samples
///    (restricted to the goal's dimension when the goal names one, otherwise
///    ordered by how uniform each dimension looks across the two groups);
///  - the rewrite layout, answered by stripping comparative phrasing.
/// Custom substring rules take precedence over both.
class MockGateway : public Gateway {
public:
    struct TruthRule {
        std::string predicate_contains;    // case-insensitive match on hypothesis text
        std::vector<std::string> keywords; // sample satisfies when any keyword occurs
    };

    // Ordered custom completions: first rule whose needle occurs in the
    // prompt wins.
    std::vector<std::pair<std::string, std::string>> completion_rules;

    std::vector<TruthRule> truth_rules;

    // When set, judge_truth reports the normalized affirmative weight for
    // every pair, emulating a judge that exposes answer likelihoods.
    std::optional<std::pair<double, double>> constant_truth_weights;

    // Hypothesis texts whose judgments come back unparseable.
    std::set<std::string> unparseable_hypotheses;

    // Token-overlap threshold for a "similar" equivalence verdict; identity
    // always yields "equivalent". Negative disables the overlap rule.
    double similar_overlap_threshold = -1.0;

    std::map<std::string, int> rubric_by_hypothesis;
    int default_rubric_rating = 1;

    std::string complete(const CompletionRequest& request) override;
    JudgedScore judge_truth(const Hypothesis& hypothesis, const TextSample& sample) override;
    EquivalenceLabel judge_equivalence(const std::string& candidate,
                                       const std::string& reference) override;
    int rate_rubric(const std::string& goal, const Hypothesis& hypothesis,
                    RubricKind rubric) override;
    std::string id() const override { return "mock"; }

    static std::string strip_comparative(const std::string& hypothesis_text);
};

} // namespace corpusdiff
