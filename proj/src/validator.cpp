#include "corpusdiff/validator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include <json.hpp>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/util.hpp"

namespace corpusdiff {

namespace {

std::vector<const TextSample*> pick_samples(const Corpus& corpus,
                                            const std::optional<int>& subsample,
                                            uint64_t seed) {
    std::vector<const TextSample*> out;
    out.reserve(corpus.size());
    for (const auto& s : corpus.samples) out.push_back(&s);
    if (!subsample || size_t(*subsample) >= out.size()) return out;

    std::vector<size_t> idx(out.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed ^ std::hash<std::string>{}(corpus.label));
    deterministic_shuffle(idx, rng);
    idx.resize(size_t(*subsample));
    std::sort(idx.begin(), idx.end()); // keep corpus order

    std::vector<const TextSample*> picked;
    picked.reserve(idx.size());
    for (size_t i : idx) picked.push_back(out[i]);
    return picked;
}

} // namespace

TruthMatrix score_hypotheses(const std::vector<Hypothesis>& hypotheses,
                             const Problem& problem, Gateway& gateway,
                             const ScoreOptions& options) {
    if (hypotheses.empty()) throw Error("score_hypotheses: no hypotheses");

    auto samples_a = pick_samples(problem.corpus_a.exploration, options.subsample, options.seed);
    auto samples_b = pick_samples(problem.corpus_b.exploration, options.subsample, options.seed);

    TruthMatrix m;
    m.hypotheses = hypotheses;
    for (const auto* s : samples_a) m.sample_ids_a.push_back(s->id);
    for (const auto* s : samples_b) m.sample_ids_b.push_back(s->id);
    m.scores_a.assign(hypotheses.size(), std::vector<double>(samples_a.size(), 0.0));
    m.scores_b.assign(hypotheses.size(), std::vector<double>(samples_b.size(), 0.0));

    const long long n_h = static_cast<long long>(hypotheses.size());
    const long long n_a = static_cast<long long>(samples_a.size());
    const long long n_b = static_cast<long long>(samples_b.size());
    const long long cells = n_h * (n_a + n_b);

    std::atomic<size_t> unparseable{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto judge_cell = [&](long long flat) {
        if (failed.load(std::memory_order_relaxed)) return;
        const long long h = flat / (n_a + n_b);
        const long long j = flat % (n_a + n_b);
        const bool side_a = j < n_a;
        const TextSample* sample = side_a ? samples_a[size_t(j)] : samples_b[size_t(j - n_a)];
        double value;
        try {
            value = gateway.judge_truth(hypotheses[size_t(h)], *sample).value;
            value = std::clamp(value, 0.0, 1.0);
        } catch (const UnparseableOutput&) {
            value = 0.5; // neutral, same convention as a confused rater
            unparseable.fetch_add(1, std::memory_order_relaxed);
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!failed.exchange(true)) first_error = e.what();
            return;
        }
        if (side_a) m.scores_a[size_t(h)][size_t(j)] = value;
        else m.scores_b[size_t(h)][size_t(j - n_a)] = value;
    };

    if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (long long flat = 0; flat < cells; ++flat) judge_cell(flat);
    } else {
        for (long long flat = 0; flat < cells; ++flat) judge_cell(flat);
    }
    if (failed.load()) throw GatewayError("scoring aborted: " + first_error);

    m.unparseable_count = unparseable.load();
    return m;
}

double v_prime(std::span<const double> row_a, std::span<const double> row_b) {
    if (row_a.empty() || row_b.empty()) throw Error("v_prime: empty score row");
    double ma = 0, mb = 0;
    for (double v : row_a) ma += v;
    for (double v : row_b) mb += v;
    return ma / double(row_a.size()) - mb / double(row_b.size());
}

void dump_truth_matrix(const std::filesystem::path& path, const TruthMatrix& m) {
    std::ostringstream out;
    for (size_t h = 0; h < m.hypotheses.size(); ++h) {
        for (size_t side = 0; side < 2; ++side) {
            const auto& ids = side == 0 ? m.sample_ids_a : m.sample_ids_b;
            const auto& scores = side == 0 ? m.scores_a[h] : m.scores_b[h];
            for (size_t j = 0; j < ids.size(); ++j) {
                nlohmann::ordered_json rec;
                rec["hypothesis"] = m.hypotheses[h].text;
                rec["sample_id"] = ids[j];
                rec["score"] = scores[j];
                out << rec.dump() << "\n";
            }
        }
    }
    write_file(path, out.str());
}

std::vector<Discovery> validate_matrix(const TruthMatrix& m, double threshold) {
    std::vector<Discovery> out;
    for (size_t h = 0; h < m.hypotheses.size(); ++h) {
        const auto& a = m.scores_a[h];
        const auto& b = m.scores_b[h];
        if (a.size() < 2 || b.size() < 2) continue;

        // Forward direction, then the swap; a hypothesis can clear at most one.
        double p_ab = one_sided_t_test(a, b);
        double p_ba = one_sided_t_test(b, a);
        if (p_ab < threshold) {
            Discovery d;
            d.hypothesis = m.hypotheses[h];
            d.hypothesis.direction = Direction::AOverB;
            d.v_prime = v_prime(a, b);
            d.p_prime = p_ab;
            d.n_a = int(a.size());
            d.n_b = int(b.size());
            out.push_back(std::move(d));
        } else if (p_ba < threshold) {
            Discovery d;
            d.hypothesis = m.hypotheses[h];
            d.hypothesis.direction = Direction::BOverA;
            d.v_prime = v_prime(b, a);
            d.p_prime = p_ba;
            d.n_a = int(a.size());
            d.n_b = int(b.size());
            out.push_back(std::move(d));
        }
    }
    std::sort(out.begin(), out.end(), [](const Discovery& x, const Discovery& y) {
        if (x.v_prime != y.v_prime) return x.v_prime > y.v_prime;
        if (x.p_prime != y.p_prime) return x.p_prime < y.p_prime;
        return x.hypothesis.text < y.hypothesis.text;
    });
    return out;
}

std::vector<Discovery> validate(const std::vector<Hypothesis>& hypotheses,
                                const Problem& problem, Gateway& gateway,
                                double threshold, const ScoreOptions& options) {
    TruthMatrix m = score_hypotheses(hypotheses, problem, gateway, options);
    return validate_matrix(m, threshold);
}

} // namespace corpusdiff
