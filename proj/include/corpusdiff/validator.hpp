#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/gateway.hpp"
#include "corpusdiff/hypothesis.hpp"
#include "corpusdiff/mathstat.hpp"

namespace corpusdiff {

/// Truth judgments for every (hypothesis, exploration sample) pair.
/// Row h of scores_a holds T'(h, x) over the judged corpus-A samples.
struct TruthMatrix {
    std::vector<Hypothesis> hypotheses;
    std::vector<std::string> sample_ids_a;
    std::vector<std::string> sample_ids_b;
    std::vector<std::vector<double>> scores_a;
    std::vector<std::vector<double>> scores_b;

    size_t unparseable_count = 0; // judgments that fell back to 0.5
};

struct ScoreOptions {
    std::optional<int> subsample; // seeded per-side cap on judged samples
    uint64_t seed = 0;
    bool parallel = true;
};

/// Judges every pair over the exploration splits (optionally a seeded
/// subsample per side). Unparseable judgments score 0.5. Judging runs in
/// parallel across pairs up to the gateway's concurrency limit; any other
/// gateway failure aborts the run and partial results are discarded.
TruthMatrix score_hypotheses(const std::vector<Hypothesis>& hypotheses,
                             const Problem& problem, Gateway& gateway,
                             const ScoreOptions& options = {});

/// Mean(row_a) - mean(row_b), in [-1, 1].
double v_prime(std::span<const double> row_a, std::span<const double> row_b);

/// One JSON record per (hypothesis, sample, score) for audit.
void dump_truth_matrix(const std::filesystem::path& path, const TruthMatrix& matrix);

/// Filters at p' < threshold, evaluating each hypothesis in both directions
/// (corpus A over B, and the swap) from one judged matrix, and returns the
/// surviving discoveries sorted by v' descending.
std::vector<Discovery> validate(const std::vector<Hypothesis>& hypotheses,
                                const Problem& problem, Gateway& gateway,
                                double threshold = 0.001, const ScoreOptions& options = {});

/// Same filter applied to an existing matrix.
std::vector<Discovery> validate_matrix(const TruthMatrix& matrix, double threshold);

} // namespace corpusdiff
