#pragma once

#include <map>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"

namespace corpusdiff {

enum class RubricKind { Relevance, Novelty, Significance };

inline const char* to_string(RubricKind k) {
    switch (k) {
        case RubricKind::Relevance: return "relevance";
        case RubricKind::Novelty: return "novelty";
        default: return "significance";
    }
}

/// Versioned prompt text resources. Templates are fixed strings so tests can
/// pin them byte-exact; run manifests record their hashes.
namespace prompts {

extern const char* const RESOURCE_VERSION;

// Substitute when a run is configured to hide the user goal.
const std::string& generic_goal_sentence();

std::string render_proposer(const std::string& goal,
                            const std::vector<TextSample>& samples_a,
                            const std::vector<TextSample>& samples_b,
                            const std::vector<std::string>& example_hypotheses);

std::string render_truth(const std::string& hypothesis_text, const std::string& sample_text);

std::string render_equivalence(const std::string& candidate, const std::string& reference);

std::string render_rewrite(const std::string& hypothesis_text);

std::string render_rubric(RubricKind kind, const std::string& goal,
                          const std::string& hypothesis_text);

// name -> sha256 of each template, for run manifests.
std::map<std::string, std::string> resource_hashes();

} // namespace prompts
} // namespace corpusdiff
