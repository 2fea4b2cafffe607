#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "corpusdiff/corpus.hpp"

namespace corpusdiff {

/// Additive-smoothed unigram log-odds between the two exploration splits.
/// log_odds(w) = log[(count_A(w)+a) / (N_A + a*V)] - log[(count_B(w)+a) / (N_B + a*V)]
/// with a = 1 and V the size of the joint vocabulary.
struct LogOddsModel {
    std::unordered_map<std::string, double> log_odds;
    double alpha = 1.0;
    size_t vocab_size = 0;
    size_t total_a = 0;
    size_t total_b = 0;

    // Words absent from both corpora contribute the smoothed baseline.
    double word_score(const std::string& word) const;

    static LogOddsModel fit(const Corpus& exploration_a, const Corpus& exploration_b);
};

struct RepresentativenessScore {
    std::string sample_id;
    double score = 0.0; // higher = more discriminative of its own corpus
};

struct RepresentativenessScores {
    std::vector<RepresentativenessScore> corpus_a;
    std::vector<RepresentativenessScore> corpus_b;
};

/// Scores every exploration sample by the length-normalized sum of unigram
/// log-odds in favor of its own corpus. The parallel kernel distributes
/// samples across threads; results are identical to the serial reference.
RepresentativenessScores score_representativeness(const Problem& problem);
RepresentativenessScores score_representativeness_serial(const Problem& problem);

enum class Percentile { Top5, Top20, Top100 };

inline const char* to_string(Percentile p) {
    switch (p) {
        case Percentile::Top5: return "top5";
        case Percentile::Top20: return "top20";
        default: return "top100";
    }
}

/// The ceil(n * pct) highest-scoring samples, ties broken by sample id
/// ascending. Stable under permutation of the input and idempotent.
std::vector<TextSample> select_percentile(const std::vector<RepresentativenessScore>& scores,
                                          const Corpus& corpus, Percentile percentile);

} // namespace corpusdiff
