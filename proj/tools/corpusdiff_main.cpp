#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/errors.hpp"
#include "corpusdiff/gateway.hpp"
#include "corpusdiff/pipeline.hpp"
#include "corpusdiff/selftrain.hpp"
#include "corpusdiff/stats.hpp"
#include "corpusdiff/synth.hpp"
#include "corpusdiff/util.hpp"

namespace {

using namespace corpusdiff;

void add_backend_flags(CLI::App* cmd, BackendConfig* backend, std::string* kind) {
    cmd->add_option("--backend", *kind, "Backend kind: mock, remote, or replay")
        ->check(CLI::IsMember({"mock", "remote", "replay"}))
        ->capture_default_str();
    cmd->add_option("--endpoint", backend->endpoint, "Chat-completion endpoint URL");
    cmd->add_option("--model-name", backend->model_name, "Model name sent to the endpoint");
    cmd->add_option("--max-concurrent-requests", backend->max_concurrent_requests,
                    "Concurrent request limit")
        ->capture_default_str();
    cmd->add_option("--cache-dir", backend->cache_dir,
                    "Response cache directory (records on remote/mock, replays on replay)");
    cmd->add_option("--api-key-env", backend->api_key_env,
                    "Environment variable holding the API key")
        ->capture_default_str();
}

BackendKind parse_kind(const std::string& kind) {
    if (kind == "remote") return BackendKind::Remote;
    if (kind == "replay") return BackendKind::Replay;
    return BackendKind::Mock;
}

void add_run_flags(CLI::App* cmd, RunConfig* config) {
    cmd->add_option("--quota", config->quota, "Distinct hypotheses to sample")
        ->capture_default_str();
    cmd->add_option("--p-threshold", config->p_threshold, "Significance filter on p'")
        ->capture_default_str();
    cmd->add_option("--fdr", config->fdr, "False discovery rate for step-up selection")
        ->capture_default_str();
    cmd->add_option("--seed", config->seed, "Run seed")->capture_default_str();
    cmd->add_flag("--include-goal,!--no-include-goal", config->include_goal,
                  "Show the exploration goal to the proposer")
        ->capture_default_str();
    cmd->add_flag("--use-validator,!--no-use-validator", config->use_validator,
                  "Score and filter hypotheses (off = output one random proposal)")
        ->capture_default_str();
    cmd->add_option("--subsample", config->subsample,
                    "Per-side cap on judged exploration samples");
    cmd->add_option("--max-prompts", config->max_prompts,
                    "Proposer prompt budget per direction")
        ->capture_default_str();
}

int fail(const std::string& where, const std::string& what) {
    nlohmann::ordered_json err;
    err["error"] = where;
    err["message"] = what;
    std::cerr << err.dump() << std::endl;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discovers goal-relevant natural-language differences between two text corpora"};
    app.require_subcommand(1);

    // discover
    RunConfig discover_config;
    std::string discover_backend = "mock";
    auto* discover = app.add_subcommand("discover", "Run the discovery pipeline on a problem");
    discover->add_option("--problem", discover_config.problem_path, "Problem manifest path")
        ->required();
    discover->add_option("--output-dir", discover_config.output_dir, "Report directory")
        ->required();
    add_run_flags(discover, &discover_config);
    add_backend_flags(discover, &discover_config.backend, &discover_backend);

    // synth-gen
    struct {
        int n = 300;
        uint64_t seed = 0;
        std::string out;
        std::string import_path;
        std::string dim1, dim2;
        bool synthesize = false;
    } gen;
    BackendConfig gen_backend_config;
    std::string gen_backend = "mock";
    auto* synth_gen = app.add_subcommand("synth-gen", "Generate a diagnostic problem suite");
    synth_gen->add_option("--n", gen.n, "Number of problems")->capture_default_str();
    synth_gen->add_option("--seed", gen.seed, "Base seed")->capture_default_str();
    synth_gen->add_option("--out", gen.out, "Suite output path (JSON lines)")->required();
    synth_gen->add_option("--import", gen.import_path,
                          "Labeled-corpus JSONL to build problems from instead of templates");
    synth_gen->add_option("--dim1", gen.dim1, "First label column for --import");
    synth_gen->add_option("--dim2", gen.dim2, "Second label column for --import");
    synth_gen->add_flag("--synthesize", gen.synthesize,
                        "Synthesize sample texts through the backend instead of templates");
    add_backend_flags(synth_gen, &gen_backend_config, &gen_backend);

    // synth-eval
    RunConfig eval_config;
    std::string eval_backend = "mock";
    struct {
        std::string suite;
        std::string mode = "equivalent";
        bool grid = false;
        std::string output_dir;
    } eval;
    auto* synth_eval =
        app.add_subcommand("synth-eval", "Run discovery over a suite and grade the outputs");
    synth_eval->add_option("--suite", eval.suite, "Suite path from synth-gen")->required();
    synth_eval->add_option("--mode", eval.mode, "Grading mode")
        ->check(CLI::IsMember({"equivalent", "equivalent-or-similar"}))
        ->capture_default_str();
    synth_eval->add_flag("--grid", eval.grid,
                         "Also evaluate the 2x2 goal-by-validator ablation grid");
    synth_eval->add_option("--output-dir", eval.output_dir, "Where to write accuracy.json");
    add_run_flags(synth_eval, &eval_config);
    add_backend_flags(synth_eval, &eval_config.backend, &eval_backend);

    // validity
    struct {
        std::string ratings;
        std::string problem;
        std::string hypothesis_id;
        std::string text;
    } validity;
    auto* validity_cmd = app.add_subcommand(
        "validity", "Estimate validity from human ratings over the validation split");
    validity_cmd->add_option("--ratings", validity.ratings, "Ratings JSONL path")->required();
    validity_cmd->add_option("--problem", validity.problem, "Problem manifest path")
        ->required();
    validity_cmd->add_option("--hypothesis-id", validity.hypothesis_id,
                             "Hypothesis id to aggregate")
        ->required();
    validity_cmd->add_option("--text", validity.text, "Display text for the table row");

    // baseline
    struct {
        std::string problem;
        int k = 5;
    } baseline;
    auto* baseline_cmd =
        app.add_subcommand("baseline", "Top discriminative unigrams per corpus");
    baseline_cmd->add_option("--problem", baseline.problem, "Problem manifest path")
        ->required();
    baseline_cmd->add_option("--k", baseline.k, "Unigrams per corpus")->capture_default_str();

    // selftrain
    BackendConfig selftrain_backend_config;
    std::string selftrain_backend = "mock";
    struct {
        std::string groups;
        std::string out;
        int n_candidates = 8;
        uint64_t seed = 0;
    } selftrain;
    auto* selftrain_cmd = app.add_subcommand(
        "selftrain", "Emit best-of-n prompt/completion pairs from grouped samples");
    selftrain_cmd->add_option("--groups", selftrain.groups, "Groups JSONL path")->required();
    selftrain_cmd->add_option("--out", selftrain.out, "Dataset output path")->required();
    selftrain_cmd->add_option("--n-candidates", selftrain.n_candidates,
                              "Candidates scored per mini-problem")
        ->capture_default_str();
    selftrain_cmd->add_option("--seed", selftrain.seed, "Run seed")->capture_default_str();
    add_backend_flags(selftrain_cmd, &selftrain_backend_config, &selftrain_backend);

    CLI11_PARSE(app, argc, argv);

    try {
        if (discover->parsed()) {
            discover_config.backend.kind = parse_kind(discover_backend);
            auto gateway = make_gateway(discover_config.backend);
            Problem problem = load_problem(discover_config.problem_path);
            DiscoverResult result = run_discover(discover_config, problem, *gateway);
            if (result.random_choice) {
                std::cout << "random proposal: " << result.random_choice->text << "\n";
            } else {
                std::cout << render_discovery_table(result.kept);
                std::cout << result.kept.size() << " discoveries kept ("
                          << result.validated.size() << " validated, "
                          << result.proposals.size() << " proposed)\n";
            }
            return 0;
        }

        if (synth_gen->parsed()) {
            std::vector<SynProblem> suite;
            if (!gen.import_path.empty()) {
                if (gen.dim1.empty() || gen.dim2.empty())
                    return fail("synth-gen", "--import requires --dim1 and --dim2");
                suite = import_labeled(gen.import_path, gen.dim1, gen.dim2, gen.n, gen.seed);
            } else if (gen.synthesize) {
                gen_backend_config.kind = parse_kind(gen_backend);
                auto gateway = make_gateway(gen_backend_config);
                for (int i = 0; i < gen.n; ++i)
                    suite.push_back(generate_problem_lm(gen.seed + uint64_t(i), *gateway));
            } else {
                suite = generate_suite(gen.n, gen.seed);
            }
            save_suite(gen.out, suite);
            std::cout << "wrote " << suite.size() << " problems to " << gen.out << "\n";
            return 0;
        }

        if (synth_eval->parsed()) {
            eval_config.backend.kind = parse_kind(eval_backend);
            auto gateway = make_gateway(eval_config.backend);
            auto suite = load_suite(eval.suite);
            GradeMode mode = eval.mode == "equivalent" ? GradeMode::EquivalentOnly
                                                       : GradeMode::EquivalentOrSimilar;
            nlohmann::ordered_json out;
            if (eval.grid) {
                for (bool goal : {true, false}) {
                    for (bool validator : {true, false}) {
                        RunConfig cell = eval_config;
                        cell.include_goal = goal;
                        cell.use_validator = validator;
                        auto res = evaluate_suite(suite, cell, *gateway, mode);
                        std::string name = std::string(goal ? "goal" : "no-goal") + "+" +
                                           (validator ? "validator" : "no-validator");
                        out["grid"][name] = res.report.accuracy;
                        std::cout << name << ": " << res.report.accuracy << "\n";
                    }
                }
            }
            auto res = evaluate_suite(suite, eval_config, *gateway, mode);
            out["accuracy"] = res.report.accuracy;
            out["n"] = res.report.n;
            out["correct"] = res.report.correct;
            out["missing"] = res.report.missing;
            std::cout << "accuracy: " << res.report.accuracy << " (" << res.report.correct
                      << "/" << res.report.n << ", " << res.report.missing << " missing)\n";
            if (!eval.output_dir.empty()) {
                write_file(std::filesystem::path(eval.output_dir) / "accuracy.json",
                           out.dump(2));
            }
            return 0;
        }

        if (validity_cmd->parsed()) {
            Problem problem = load_problem(validity.problem);
            auto ratings = load_ratings(validity.ratings);
            std::map<std::string, std::vector<RatingLabel>> by_sample;
            for (const auto& r : ratings) {
                if (r.hypothesis_id == validity.hypothesis_id)
                    by_sample[r.sample_id].push_back(r.label);
            }
            if (by_sample.empty())
                return fail("validity", "no ratings for hypothesis id " + validity.hypothesis_id);
            std::map<std::string, double> judged;
            for (const auto& [sample_id, labels] : by_sample)
                judged[sample_id] = aggregate_ratings(labels);
            Hypothesis h;
            h.text = validity.text.empty() ? validity.hypothesis_id : validity.text;
            ValidityEstimate est = estimate_validity(h, problem, judged);
            std::cout << render_validity_row(h.text, est);
            std::cout << "n_a=" << est.n_a << " n_b=" << est.n_b << "\n";
            return 0;
        }

        if (baseline_cmd->parsed()) {
            Problem problem = load_problem(baseline.problem);
            auto features = top_discriminative_unigrams(problem, baseline.k);
            std::cout << "corpus A:\n";
            for (const auto& f : features.corpus_a)
                std::cout << "  " << f.word << "  " << f.log_odds << "\n";
            std::cout << "corpus B:\n";
            for (const auto& f : features.corpus_b)
                std::cout << "  " << f.word << "  " << f.log_odds << "\n";
            return 0;
        }

        if (selftrain_cmd->parsed()) {
            selftrain_backend_config.kind = parse_kind(selftrain_backend);
            auto gateway = make_gateway(selftrain_backend_config);
            auto groups = load_groups(selftrain.groups);
            SelfTrainOptions opts;
            opts.n_candidates = selftrain.n_candidates;
            opts.seed = selftrain.seed;
            size_t written = emit_dataset(groups, *gateway, selftrain.out, opts);
            std::cout << "wrote " << written << " pairs to " << selftrain.out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        return fail(app.get_subcommands().front()->get_name(), e.what());
    }
    return 0;
}
