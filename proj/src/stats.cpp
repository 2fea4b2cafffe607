#include "corpusdiff/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/mathstat.hpp"
#include "corpusdiff/scoring.hpp"
#include "corpusdiff/util.hpp"

namespace corpusdiff {

RatingLabel rating_label_from_string(const std::string& s) {
    if (s == "CertainlyYes") return RatingLabel::CertainlyYes;
    if (s == "LikelyYes") return RatingLabel::LikelyYes;
    if (s == "Neutral") return RatingLabel::Neutral;
    if (s == "LikelyNo") return RatingLabel::LikelyNo;
    if (s == "CertainlyNo") return RatingLabel::CertainlyNo;
    if (s == "Confusing") return RatingLabel::Confusing;
    throw ManifestError("unknown rating label: " + s);
}

const char* to_string(RatingLabel label) {
    switch (label) {
        case RatingLabel::CertainlyYes: return "CertainlyYes";
        case RatingLabel::LikelyYes: return "LikelyYes";
        case RatingLabel::Neutral: return "Neutral";
        case RatingLabel::LikelyNo: return "LikelyNo";
        case RatingLabel::CertainlyNo: return "CertainlyNo";
        default: return "Confusing";
    }
}

double aggregate_ratings(std::span<const RatingLabel> labels) {
    if (labels.empty()) throw Error("aggregate_ratings: no ratings");
    double sum = 0.0;
    size_t n = 0;
    for (RatingLabel label : labels) {
        switch (label) {
            case RatingLabel::CertainlyYes: sum += 1.00; n += 1; break;
            case RatingLabel::LikelyYes: sum += 0.75; n += 1; break;
            case RatingLabel::Neutral: sum += 0.50; n += 1; break;
            case RatingLabel::LikelyNo: sum += 0.25; n += 1; break;
            case RatingLabel::CertainlyNo: sum += 0.00; n += 1; break;
            case RatingLabel::Confusing: sum += 1.00; n += 2; break; // two 0.50 entries
        }
    }
    return sum / double(n);
}

std::vector<HumanRating> load_ratings(const std::filesystem::path& path) {
    std::vector<HumanRating> out;
    for_each_line(path, [&](size_t line_no, const std::string& line) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw ManifestError("ratings line " + std::to_string(line_no) + ": malformed JSON");
        for (const char* key : {"hypothesis_id", "sample_id", "rater_id", "label"}) {
            if (!j.contains(key))
                throw ManifestError("ratings line " + std::to_string(line_no) +
                                    ": missing " + key);
        }
        out.push_back({j["hypothesis_id"].get<std::string>(),
                       j["sample_id"].get<std::string>(),
                       j["rater_id"].get<std::string>(),
                       rating_label_from_string(j["label"].get<std::string>())});
    });
    return out;
}

ValidityEstimate estimate_validity(const Hypothesis& h, const Problem& problem,
                                   const std::map<std::string, double>& judged) {
    (void)h;
    std::vector<double> scores_a, scores_b;
    for (const auto& s : problem.corpus_a.validation.samples) {
        if (auto it = judged.find(s.id); it != judged.end()) scores_a.push_back(it->second);
    }
    for (const auto& s : problem.corpus_b.validation.samples) {
        if (auto it = judged.find(s.id); it != judged.end()) scores_b.push_back(it->second);
    }
    if (scores_a.size() < 2 || scores_b.size() < 2)
        throw Error("estimate_validity: fewer than 2 judged validation samples per corpus");

    ValidityEstimate est;
    est.n_a = int(scores_a.size());
    est.n_b = int(scores_b.size());
    double ma = 0, mb = 0;
    for (double v : scores_a) ma += v;
    for (double v : scores_b) mb += v;
    est.v = ma / double(scores_a.size()) - mb / double(scores_b.size());
    est.p = one_sided_t_test(scores_a, scores_b);
    return est;
}

std::vector<size_t> benjamini_hochberg(std::span<const double> p_values, double fdr) {
    const size_t m = p_values.size();
    if (m == 0) return {};
    std::vector<size_t> order(m);
    for (size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        if (p_values[x] != p_values[y]) return p_values[x] < p_values[y];
        return x < y;
    });
    size_t k_star = 0;
    for (size_t k = 1; k <= m; ++k) {
        if (p_values[order[k - 1]] <= double(k) * fdr / double(m)) k_star = k;
    }
    std::vector<size_t> kept(order.begin(), order.begin() + k_star);
    std::sort(kept.begin(), kept.end());
    return kept;
}

DiscriminativeUnigrams top_discriminative_unigrams(const Problem& problem, int k) {
    const Corpus& ea = problem.corpus_a.exploration;
    const Corpus& eb = problem.corpus_b.exploration;
    if (ea.empty() || eb.empty())
        throw Error("top_discriminative_unigrams: empty exploration split");
    LogOddsModel model = LogOddsModel::fit(ea, eb);

    std::vector<UnigramFeature> features;
    features.reserve(model.log_odds.size());
    for (const auto& [w, lo] : model.log_odds) features.push_back({w, lo});

    DiscriminativeUnigrams out;
    auto take = [&](bool for_a) {
        auto ranked = features;
        std::sort(ranked.begin(), ranked.end(), [&](const auto& x, const auto& y) {
            double sx = for_a ? x.log_odds : -x.log_odds;
            double sy = for_a ? y.log_odds : -y.log_odds;
            if (sx != sy) return sx > sy;
            return x.word < y.word;
        });
        ranked.resize(std::min<size_t>(size_t(k), ranked.size()));
        if (!for_a)
            for (auto& f : ranked) f.log_odds = -f.log_odds;
        return ranked;
    };
    out.corpus_a = take(true);
    out.corpus_b = take(false);
    return out;
}

namespace {

std::string fmt_v(std::optional<double> v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *v);
    return buf;
}

std::string fmt_p(std::optional<double> p) {
    if (!p) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", *p);
    return buf;
}

std::string render_rows(
    const std::vector<std::tuple<std::string, std::optional<double>, std::optional<double>,
                                 std::optional<double>, std::optional<double>>>& rows) {
    size_t width = std::string("discovery").size();
    for (const auto& r : rows) width = std::max(width, std::get<0>(r).size());
    width = std::min<size_t>(width, 60);

    std::ostringstream out;
    auto pad = [&](const std::string& s) {
        std::string t = s.size() > width ? s.substr(0, width - 3) + "..." : s;
        out << t << std::string(width - t.size(), ' ');
    };
    pad("discovery");
    out << "  V      p         V'     p'\n";
    for (const auto& [text, v, p, vp, pp] : rows) {
        pad(text);
        out << "  " << fmt_v(v) << "   " << fmt_p(p) << "  " << fmt_v(vp) << "   "
            << fmt_p(pp) << "\n";
    }
    return out.str();
}

} // namespace

std::string render_discovery_table(std::span<const Discovery> discoveries) {
    std::vector<std::tuple<std::string, std::optional<double>, std::optional<double>,
                           std::optional<double>, std::optional<double>>>
        rows;
    for (const auto& d : discoveries) {
        rows.emplace_back(d.hypothesis.text, d.v, d.p, d.v_prime, d.p_prime);
    }
    return render_rows(rows);
}

std::string render_validity_row(const std::string& hypothesis_text,
                                const ValidityEstimate& estimate) {
    return render_rows({{hypothesis_text, estimate.v, estimate.p, std::nullopt, std::nullopt}});
}

} // namespace corpusdiff
