#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/gateway.hpp"

namespace corpusdiff {

/// A four-versus-four description task drawn from pre-clustered text groups.
struct MiniProblem {
    std::array<TextSample, 4> group_a;
    std::array<TextSample, 4> group_b;
    std::string origin;
};

struct CandidateScore {
    std::string hypothesis;
    double v_prime;
};

/// One fine-tuning example: the proposer prompt over the eight in-prompt
/// samples and the best-scoring candidate hypothesis as its completion.
struct TrainPair {
    std::string prompt;
    std::string completion;
    std::vector<CandidateScore> candidate_scores;
};

// JSON lines {"group_a": [4 strings], "group_b": [4 strings], "origin": string}.
std::vector<MiniProblem> load_groups(const std::filesystem::path& path);

struct SelfTrainOptions {
    int n_candidates = 8;
    double temperature = 0.8;
    uint64_t seed = 0;
    int max_prompts = 8; // completions drawn before giving up on new candidates
};

/// Samples candidate hypotheses for the mini-problem, scores each one by its
/// mean truth-judgment difference over only the eight in-prompt samples, and
/// returns the argmax as the completion (ties go to the lexicographically
/// smaller text). Errors when no candidate parses.
TrainPair make_train_pair(const MiniProblem& mp, Gateway& gateway,
                          const SelfTrainOptions& options = {});

/// Writes one {"prompt", "completion"} JSON record per mini-problem, in input
/// order. Returns the number of records written.
size_t emit_dataset(const std::vector<MiniProblem>& mini_problems, Gateway& gateway,
                    const std::filesystem::path& out_path,
                    const SelfTrainOptions& options = {});

} // namespace corpusdiff
