#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/hypothesis.hpp"

namespace corpusdiff {

enum class RatingLabel {
    CertainlyYes,
    LikelyYes,
    Neutral,
    LikelyNo,
    CertainlyNo,
    Confusing,
};

RatingLabel rating_label_from_string(const std::string& s);
const char* to_string(RatingLabel label);

struct HumanRating {
    std::string hypothesis_id;
    std::string sample_id;
    std::string rater_id;
    RatingLabel label;
};

/// Mean certainty from one (hypothesis, sample)'s ratings. Labels map to
/// 1.00/0.75/0.50/0.25/0.00; a Confusing rating contributes two 0.50 entries
/// so it drags the average toward neutral harder than Neutral does.
double aggregate_ratings(std::span<const RatingLabel> labels);

// JSON lines {hypothesis_id, sample_id, rater_id, label}.
std::vector<HumanRating> load_ratings(const std::filesystem::path& path);

struct ValidityEstimate {
    double v = 0.0;
    double p = 1.0;
    int n_a = 0;
    int n_b = 0;
};

/// Validity over the validation splits from aggregated per-sample scores:
/// V = mean over judged corpus-A validation samples - mean over corpus-B,
/// with a one-sided significance. Needs at least two judged samples per side.
ValidityEstimate estimate_validity(const Hypothesis& h, const Problem& problem,
                                   const std::map<std::string, double>& judged);

/// Step-up selection at the given false discovery rate: sort p ascending and
/// keep everything up to the largest k with p(k) <= k*fdr/m. Returns kept
/// indices into the input order, sorted.
std::vector<size_t> benjamini_hochberg(std::span<const double> p_values, double fdr = 0.10);

struct UnigramFeature {
    std::string word;
    double log_odds;
};

struct DiscriminativeUnigrams {
    std::vector<UnigramFeature> corpus_a;
    std::vector<UnigramFeature> corpus_b;
};

/// The k unigrams with the largest smoothed log-odds for each corpus over
/// the exploration splits, ties broken alphabetically.
DiscriminativeUnigrams top_discriminative_unigrams(const Problem& problem, int k = 5);

/// Fixed-width table with columns: discovery, V, p, V', p'.
std::string render_discovery_table(std::span<const Discovery> discoveries);

/// One table row for a human-validated hypothesis with no machine run; the
/// V'/p' columns render as dashes.
std::string render_validity_row(const std::string& hypothesis_text,
                                const ValidityEstimate& estimate);

} // namespace corpusdiff
