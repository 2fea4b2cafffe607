#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/gateway.hpp"
#include "corpusdiff/hypothesis.hpp"
#include "corpusdiff/synth.hpp"

namespace corpusdiff {

struct RunConfig {
    std::string problem_path;
    BackendConfig backend;
    int quota = 60;
    double p_threshold = 0.001;
    double fdr = 0.10;
    uint64_t seed = 0;
    bool include_goal = true;
    bool use_validator = true;
    std::string output_dir; // empty disables file output
    std::optional<int> subsample = 2000; // per-side cap on judged samples
    int max_prompts = 50;

    void check() const;
};

struct DiscoverResult {
    std::vector<Hypothesis> proposals;       // both directions, after rewriting
    std::vector<Discovery> validated;        // p' < threshold, both directions
    std::vector<Discovery> kept;             // after step-up selection at the FDR
    std::optional<Hypothesis> random_choice; // the no-validator arm's output
    size_t dropped_comparatives = 0;

    /// Top-ranked output for grading: the first kept discovery, or the random
    /// choice when the validator was ablated.
    std::optional<Hypothesis> top_output() const;
};

/// The full run: propose in both corpus directions, rewrite comparatives,
/// judge and filter, then select at the FDR. With use_validator off the
/// result is instead one seeded-uniform choice among the proposals. When an
/// output directory is configured, writes report.jsonl, prompts/,
/// truth_matrix.jsonl and run_manifest.json.
DiscoverResult run_discover(const RunConfig& config, const Problem& problem,
                            Gateway& gateway);

struct SynthEvalResult {
    AccuracyReport report;
    std::vector<std::optional<Hypothesis>> outputs;
};

/// Runs discovery on every suite problem and grades the top outputs against
/// the references. The validator acts as a ranker here: the per-problem runs
/// use vacuous thresholds so the highest-v' hypothesis survives to the top.
SynthEvalResult evaluate_suite(const std::vector<SynProblem>& suite, const RunConfig& config,
                               Gateway& gateway, GradeMode mode);

void write_report(const std::filesystem::path& path, const std::vector<Discovery>& kept);
std::vector<Discovery> read_report(const std::filesystem::path& path);

} // namespace corpusdiff
