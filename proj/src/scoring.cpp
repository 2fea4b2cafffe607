#include "corpusdiff/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/tokenizer.hpp"

namespace corpusdiff {

double LogOddsModel::word_score(const std::string& word) const {
    auto it = log_odds.find(word);
    if (it != log_odds.end()) return it->second;
    double denom_a = double(total_a) + alpha * double(vocab_size);
    double denom_b = double(total_b) + alpha * double(vocab_size);
    return std::log(alpha / denom_a) - std::log(alpha / denom_b);
}

LogOddsModel LogOddsModel::fit(const Corpus& exploration_a, const Corpus& exploration_b) {
    std::unordered_map<std::string, size_t> count_a, count_b;
    size_t total_a = 0, total_b = 0;
    for (const auto& s : exploration_a.samples) {
        for (auto& w : word_tokens(s.text)) {
            ++count_a[w];
            ++total_a;
        }
    }
    for (const auto& s : exploration_b.samples) {
        for (auto& w : word_tokens(s.text)) {
            ++count_b[w];
            ++total_b;
        }
    }
    std::unordered_map<std::string, size_t> vocab = count_a;
    for (const auto& [w, n] : count_b) vocab.emplace(w, 0);

    LogOddsModel m;
    m.alpha = 1.0;
    m.vocab_size = vocab.size();
    m.total_a = total_a;
    m.total_b = total_b;
    const double denom_a = double(total_a) + m.alpha * double(m.vocab_size);
    const double denom_b = double(total_b) + m.alpha * double(m.vocab_size);
    m.log_odds.reserve(vocab.size());
    for (const auto& [w, unused] : vocab) {
        double ca = double(count_a.count(w) ? count_a[w] : 0);
        double cb = double(count_b.count(w) ? count_b[w] : 0);
        m.log_odds[w] = std::log((ca + m.alpha) / denom_a) - std::log((cb + m.alpha) / denom_b);
    }
    return m;
}

namespace {

double sample_score(const LogOddsModel& model, const std::string& text, double sign) {
    auto words = word_tokens(text);
    if (words.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& w : words) sum += model.word_score(w);
    return sign * sum / double(words.size());
}

RepresentativenessScores score_impl(const Problem& problem, bool parallel) {
    const Corpus& ea = problem.corpus_a.exploration;
    const Corpus& eb = problem.corpus_b.exploration;
    if (ea.empty() || eb.empty())
        throw Error("score_representativeness: empty exploration split");
    LogOddsModel model = LogOddsModel::fit(ea, eb);

    RepresentativenessScores out;
    out.corpus_a.resize(ea.size());
    out.corpus_b.resize(eb.size());

    const auto na = static_cast<long long>(ea.size());
    const auto nb = static_cast<long long>(eb.size());
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < na; ++i) {
            out.corpus_a[size_t(i)] = {ea.samples[size_t(i)].id,
                                       sample_score(model, ea.samples[size_t(i)].text, 1.0)};
        }
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < nb; ++i) {
            out.corpus_b[size_t(i)] = {eb.samples[size_t(i)].id,
                                       sample_score(model, eb.samples[size_t(i)].text, -1.0)};
        }
    } else {
        for (long long i = 0; i < na; ++i) {
            out.corpus_a[size_t(i)] = {ea.samples[size_t(i)].id,
                                       sample_score(model, ea.samples[size_t(i)].text, 1.0)};
        }
        for (long long i = 0; i < nb; ++i) {
            out.corpus_b[size_t(i)] = {eb.samples[size_t(i)].id,
                                       sample_score(model, eb.samples[size_t(i)].text, -1.0)};
        }
    }
    return out;
}

} // namespace

RepresentativenessScores score_representativeness(const Problem& problem) {
    return score_impl(problem, true);
}

RepresentativenessScores score_representativeness_serial(const Problem& problem) {
    return score_impl(problem, false);
}

std::vector<TextSample> select_percentile(const std::vector<RepresentativenessScore>& scores,
                                          const Corpus& corpus, Percentile percentile) {
    if (scores.empty()) throw Error("select_percentile: no scores");
    double pct = percentile == Percentile::Top5 ? 0.05
               : percentile == Percentile::Top20 ? 0.20
                                                 : 1.00;
    auto ranked = scores;
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.sample_id < y.sample_id;
    });
    size_t keep = static_cast<size_t>(std::ceil(double(ranked.size()) * pct));
    keep = std::min(keep, ranked.size());

    std::unordered_map<std::string, const TextSample*> by_id;
    for (const auto& s : corpus.samples) by_id[s.id] = &s;
    std::vector<TextSample> out;
    out.reserve(keep);
    for (size_t i = 0; i < keep; ++i) {
        auto it = by_id.find(ranked[i].sample_id);
        if (it == by_id.end())
            throw Error("select_percentile: unknown sample id " + ranked[i].sample_id);
        out.push_back(*it->second);
    }
    return out;
}

} // namespace corpusdiff
