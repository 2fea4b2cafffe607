#include "corpusdiff/pipeline.hpp"

#include <algorithm>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/prompts.hpp"
#include "corpusdiff/proposer.hpp"
#include "corpusdiff/stats.hpp"
#include "corpusdiff/util.hpp"
#include "corpusdiff/validator.hpp"

namespace corpusdiff {

void RunConfig::check() const {
    if (quota < 1) throw Error("quota must be >= 1");
    if (!(p_threshold > 0.0 && p_threshold <= 1.0)) throw Error("p-threshold must be in (0,1]");
    if (!(fdr > 0.0 && fdr <= 1.0)) throw Error("fdr must be in (0,1]");
    if (max_prompts < 1) throw Error("max-prompts must be >= 1");
}

std::optional<Hypothesis> DiscoverResult::top_output() const {
    if (random_choice) return random_choice;
    if (!kept.empty()) return kept.front().hypothesis;
    return std::nullopt;
}

namespace {

// Proposals from the two passes are deduplicated by text: the direction tag
// carried here is only the originating pass, the validator assigns the
// direction a hypothesis actually supports.
std::vector<Hypothesis> propose_both_directions(const RunConfig& config,
                                                const Problem& problem, Gateway& gateway,
                                                PromptTrace* trace, size_t* dropped) {
    std::vector<Hypothesis> all;
    std::set<std::string> seen;

    for (Direction dir : {Direction::AOverB, Direction::BOverA}) {
        Problem view = dir == Direction::AOverB ? problem : problem.swapped();
        ProposeOptions opts;
        opts.quota = config.quota;
        opts.max_prompts = config.max_prompts;
        opts.seed = config.seed + (dir == Direction::BOverA ? 0x10000000ull : 0ull);
        opts.include_goal = config.include_goal;
        std::vector<Hypothesis> proposals = propose(view, gateway, opts, trace);

        for (auto& h : proposals) {
            h.direction = dir;
            if (detect_comparative(h)) {
                auto rewritten = rewrite_comparative(h, gateway);
                if (!rewritten) {
                    if (dropped) ++*dropped;
                    std::cerr << "warning: dropped comparative hypothesis: " << h.text
                              << "\n";
                    continue;
                }
                h = *rewritten;
                h.direction = dir;
            }
            if (seen.insert(h.text).second) all.push_back(std::move(h));
        }
    }
    return all;
}

void write_manifest(const RunConfig& config, const Problem& problem, Gateway& gateway,
                    const DiscoverResult& result) {
    nlohmann::ordered_json j;
    j["config"] = {
        {"problem_path", config.problem_path},
        {"quota", config.quota},
        {"p_threshold", config.p_threshold},
        {"fdr", config.fdr},
        {"seed", config.seed},
        {"include_goal", config.include_goal},
        {"use_validator", config.use_validator},
        {"subsample", config.subsample ? nlohmann::json(*config.subsample) : nlohmann::json()},
        {"max_prompts", config.max_prompts},
    };
    j["backend"] = {
        {"id", gateway.id()},
        {"model_name", config.backend.model_name},
        {"cache_dir", config.backend.cache_dir},
        {"max_concurrent_requests", config.backend.max_concurrent_requests},
    };
    j["problem_goal"] = problem.goal;
    j["resource_hashes"] = prompts::resource_hashes();
    j["counts"] = {
        {"proposals", result.proposals.size()},
        {"validated", result.validated.size()},
        {"kept", result.kept.size()},
        {"dropped_comparatives", result.dropped_comparatives},
    };
    write_file(std::filesystem::path(config.output_dir) / "run_manifest.json", j.dump(2));
}

} // namespace

void write_report(const std::filesystem::path& path, const std::vector<Discovery>& kept) {
    std::ostringstream out;
    for (const auto& d : kept) out << discovery_to_json(d).dump() << "\n";
    write_file(path, out.str());
}

std::vector<Discovery> read_report(const std::filesystem::path& path) {
    std::vector<Discovery> out;
    for_each_line(path, [&](size_t, const std::string& line) {
        out.push_back(discovery_from_json(nlohmann::json::parse(line)));
    });
    return out;
}

DiscoverResult run_discover(const RunConfig& config, const Problem& problem,
                            Gateway& gateway) {
    config.check();
    DiscoverResult result;
    PromptTrace trace;

    result.proposals = propose_both_directions(config, problem, gateway, &trace,
                                               &result.dropped_comparatives);

    if (!config.use_validator) {
        // Ablation arm: a seeded uniform pick instead of scoring.
        std::mt19937_64 rng(config.seed ^ 0x5bf03635ull);
        result.random_choice =
            result.proposals[size_t(rand_index(rng, result.proposals.size()))];
    } else {
        // One judged matrix serves both directions; hypotheses proposed about
        // either corpus are filtered on the direction they actually support.
        ScoreOptions score_opts;
        score_opts.subsample = config.subsample;
        score_opts.seed = config.seed;
        TruthMatrix matrix =
            score_hypotheses(result.proposals, problem, gateway, score_opts);
        result.validated = validate_matrix(matrix, config.p_threshold);

        std::vector<double> p_values;
        p_values.reserve(result.validated.size());
        for (const auto& d : result.validated) p_values.push_back(d.p_prime);
        for (size_t idx : benjamini_hochberg(p_values, config.fdr)) {
            result.kept.push_back(result.validated[idx]);
        }

        if (!config.output_dir.empty()) {
            dump_truth_matrix(std::filesystem::path(config.output_dir) / "truth_matrix.jsonl",
                              matrix);
        }
    }

    if (!config.output_dir.empty()) {
        auto dir = std::filesystem::path(config.output_dir);
        std::filesystem::create_directories(dir / "prompts");
        for (const auto& bundle : trace.bundles) {
            write_file(dir / "prompts" / (bundle.id + ".txt"), bundle.prompt_text);
        }
        write_report(dir / "report.jsonl", result.kept);
        write_manifest(config, problem, gateway, result);
    }
    return result;
}

SynthEvalResult evaluate_suite(const std::vector<SynProblem>& suite, const RunConfig& config,
                               Gateway& gateway, GradeMode mode) {
    config.check();
    SynthEvalResult out;
    out.outputs.reserve(suite.size());

    for (size_t i = 0; i < suite.size(); ++i) {
        RunConfig per_problem = config;
        per_problem.output_dir.clear();
        per_problem.seed = config.seed + i;
        // Rank-only validation: the reported output is the highest-v'
        // hypothesis, so the significance filter and FDR stage are vacuous.
        per_problem.p_threshold = 1.0;
        per_problem.fdr = 1.0;
        try {
            DiscoverResult r = run_discover(per_problem, suite[i].problem, gateway);
            out.outputs.push_back(r.top_output());
        } catch (const Error& e) {
            std::cerr << "warning: problem " << i << " produced no output: " << e.what()
                      << "\n";
            out.outputs.push_back(std::nullopt);
        }
    }
    out.report = grade_suite(out.outputs, suite, gateway, mode);
    return out;
}

} // namespace corpusdiff
