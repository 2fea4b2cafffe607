// Times the parallel scoring kernels against their serial references on a
// synthetic workload and checks they agree.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/mock_gateway.hpp"
#include "corpusdiff/scoring.hpp"
#include "corpusdiff/util.hpp"
#include "corpusdiff/validator.hpp"

using namespace corpusdiff;

namespace {

Problem synthetic_problem(size_t samples_per_side, size_t words_per_sample, uint64_t seed) {
    static const char* vocab_a[] = {"engine", "torque", "piston", "chassis", "gearbox",
                                    "valve", "sensor", "the", "a", "with", "runs", "fast"};
    static const char* vocab_b[] = {"violin", "sonata", "tempo", "chord", "melody",
                                    "opera", "score", "the", "a", "with", "plays", "slow"};
    std::mt19937_64 rng(seed);
    auto make_corpus = [&](const char* label, const char** vocab, size_t vocab_n) {
        Corpus c;
        c.label = label;
        for (size_t i = 0; i < samples_per_side; ++i) {
            std::string text;
            for (size_t w = 0; w < words_per_sample; ++w) {
                if (w) text += ' ';
                text += vocab[rand_index(rng, vocab_n)];
            }
            c.samples.push_back({std::string(label) + "-" + std::to_string(i + 1), text});
        }
        return c;
    };
    Problem p;
    p.goal = "understand how the two corpora differ";
    p.corpus_a = split_corpus(make_corpus("A", vocab_a, 12), seed);
    p.corpus_b = split_corpus(make_corpus("B", vocab_b, 12), seed + 1);
    return p;
}

template <typename F>
double time_ms(F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

bool same_scores(const RepresentativenessScores& x, const RepresentativenessScores& y) {
    auto eq = [](const std::vector<RepresentativenessScore>& a,
                 const std::vector<RepresentativenessScore>& b) {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].sample_id != b[i].sample_id || a[i].score != b[i].score) return false;
        }
        return true;
    };
    return eq(x.corpus_a, y.corpus_a) && eq(x.corpus_b, y.corpus_b);
}

} // namespace

int main() {
    Problem problem = synthetic_problem(20000, 40, 7);

    RepresentativenessScores serial, parallel;
    double t_serial = time_ms([&] { serial = score_representativeness_serial(problem); });
    double t_parallel = time_ms([&] { parallel = score_representativeness(problem); });
    std::printf("representativeness  serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   %s\n",
                t_serial, t_parallel, t_serial / t_parallel,
                same_scores(serial, parallel) ? "match" : "MISMATCH");

    // Truth-matrix scoring with the keyword mock as the judge.
    Problem small = synthetic_problem(400, 40, 11);
    MockGateway mock;
    mock.truth_rules.push_back({"engine", {"engine", "torque", "piston"}});
    mock.truth_rules.push_back({"music", {"violin", "sonata", "melody"}});
    std::vector<Hypothesis> hyps;
    for (int i = 0; i < 16; ++i) {
        Hypothesis h;
        h.text = i % 2 == 0 ? "mentions an engine" : "is about music";
        h.text += " (" + std::to_string(i) + ")";
        hyps.push_back(h);
    }
    mock.truth_rules.push_back({"", {"the"}}); // catch-all keeps every row busy

    ScoreOptions serial_opts;
    serial_opts.parallel = false;
    TruthMatrix m_serial, m_parallel;
    double tm_serial =
        time_ms([&] { m_serial = score_hypotheses(hyps, small, mock, serial_opts); });
    double tm_parallel = time_ms([&] { m_parallel = score_hypotheses(hyps, small, mock); });
    bool match = m_serial.scores_a == m_parallel.scores_a &&
                 m_serial.scores_b == m_parallel.scores_b;
    std::printf("truth matrix        serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   %s\n",
                tm_serial, tm_parallel, tm_serial / tm_parallel, match ? "match" : "MISMATCH");
    return 0;
}
