#include "corpusdiff/selftrain.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/prompts.hpp"
#include "corpusdiff/proposer.hpp"
#include "corpusdiff/util.hpp"
#include "corpusdiff/validator.hpp"

namespace corpusdiff {

std::vector<MiniProblem> load_groups(const std::filesystem::path& path) {
    std::vector<MiniProblem> out;
    for_each_line(path, [&](size_t line_no, const std::string& line) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("group_a") ||
            !j.contains("group_b")) {
            throw ManifestError("groups line " + std::to_string(line_no) +
                                ": expected group_a and group_b");
        }
        auto texts_a = j["group_a"].get<std::vector<std::string>>();
        auto texts_b = j["group_b"].get<std::vector<std::string>>();
        if (texts_a.size() != 4 || texts_b.size() != 4)
            throw ManifestError("groups line " + std::to_string(line_no) +
                                ": each group needs exactly 4 samples");
        MiniProblem mp;
        mp.origin = j.value("origin", std::string());
        for (size_t i = 0; i < 4; ++i) {
            mp.group_a[i] = {"a" + std::to_string(i + 1), texts_a[i]};
            mp.group_b[i] = {"b" + std::to_string(i + 1), texts_b[i]};
        }
        out.push_back(std::move(mp));
    });
    return out;
}

TrainPair make_train_pair(const MiniProblem& mp, Gateway& gateway,
                          const SelfTrainOptions& options) {
    std::vector<TextSample> samples_a(mp.group_a.begin(), mp.group_a.end());
    std::vector<TextSample> samples_b(mp.group_b.begin(), mp.group_b.end());

    TrainPair pair;
    pair.prompt = prompts::render_proposer(prompts::generic_goal_sentence(), samples_a,
                                           samples_b, {});

    // Collect distinct candidates across completions.
    std::vector<std::string> candidates;
    std::set<std::string> seen;
    for (int i = 0; i < options.max_prompts && int(candidates.size()) < options.n_candidates;
         ++i) {
        CompletionRequest req;
        req.prompt = pair.prompt;
        req.max_output_tokens = 256;
        req.temperature = options.temperature;
        std::string completion = gateway.complete(req);
        int new_count = 0;
        for (auto& text : parse_hypothesis_list(completion)) {
            if (int(candidates.size()) >= options.n_candidates) break;
            if (seen.insert(text).second) {
                candidates.push_back(std::move(text));
                ++new_count;
            }
        }
        if (new_count == 0) break; // deterministic backend, no point retrying
    }
    if (candidates.empty()) throw Error("make_train_pair: no parseable candidates");

    for (const auto& text : candidates) {
        Hypothesis h;
        h.text = text;
        std::vector<double> row_a, row_b;
        for (const auto& s : mp.group_a) row_a.push_back(gateway.judge_truth(h, s).value);
        for (const auto& s : mp.group_b) row_b.push_back(gateway.judge_truth(h, s).value);
        pair.candidate_scores.push_back({text, v_prime(row_a, row_b)});
    }

    const CandidateScore* best = &pair.candidate_scores.front();
    for (const auto& cs : pair.candidate_scores) {
        if (cs.v_prime > best->v_prime ||
            (cs.v_prime == best->v_prime && cs.hypothesis < best->hypothesis)) {
            best = &cs;
        }
    }
    pair.completion = best->hypothesis;
    return pair;
}

size_t emit_dataset(const std::vector<MiniProblem>& mini_problems, Gateway& gateway,
                    const std::filesystem::path& out_path, const SelfTrainOptions& options) {
    std::vector<TrainPair> pairs(mini_problems.size());
    const long long n = static_cast<long long>(mini_problems.size());
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            pairs[size_t(i)] = make_train_pair(mini_problems[size_t(i)], gateway, options);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!failed.exchange(true)) first_error = e.what();
        }
    }
    if (failed.load()) throw Error("emit_dataset: " + first_error);

    std::ostringstream out;
    for (const auto& p : pairs) {
        nlohmann::ordered_json rec;
        rec["prompt"] = p.prompt;
        rec["completion"] = p.completion;
        out << rec.dump() << "\n";
    }
    write_file(out_path, out.str());
    return pairs.size();
}

} // namespace corpusdiff
