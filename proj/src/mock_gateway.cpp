#include "corpusdiff/mock_gateway.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/synth.hpp"
#include "corpusdiff/tokenizer.hpp"
#include "corpusdiff/util.hpp"

namespace corpusdiff {

namespace {

bool contains_ci(const std::string& haystack, const std::string& needle) {
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::string normalize_predicate(const std::string& s) {
    std::string t = to_lower(trim(s));
    while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
    return trim(t);
}

struct ParsedPrompt {
    std::vector<std::string> samples_a;
    std::vector<std::string> samples_b;
    std::string goal;
};

std::vector<std::string> parse_numbered_block(const std::vector<std::string>& lines,
                                              size_t start) {
    std::vector<std::string> out;
    for (size_t i = start; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (trim(line).empty()) break;
        auto dot = line.find(". ");
        if (dot == std::string::npos || dot == 0) break;
        out.push_back(line.substr(dot + 2));
    }
    return out;
}

std::optional<ParsedPrompt> parse_proposer_prompt(const std::string& prompt) {
    std::vector<std::string> lines;
    std::istringstream ss(prompt);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);

    ParsedPrompt pp;
    bool has_a = false, has_b = false;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i] == "Samples from Corpus A:") {
            pp.samples_a = parse_numbered_block(lines, i + 1);
            has_a = true;
        } else if (lines[i] == "Samples from Corpus B:") {
            pp.samples_b = parse_numbered_block(lines, i + 1);
            has_b = true;
        } else if (lines[i].rfind("Exploration goal: ", 0) == 0) {
            pp.goal = lines[i].substr(std::string("Exploration goal: ").size());
        }
    }
    if (!has_a || !has_b || pp.goal.empty()) return std::nullopt;
    return pp;
}

// Predicates for the dimension values that actually occur in the shown
// samples, one dimension at a time. Within a dimension, predicates follow
// first appearance scanning group A then group B.
std::vector<std::string> predicates_for_dimension(const DimensionSpec& dim,
                                                  const ParsedPrompt& pp) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto* group : {&pp.samples_a, &pp.samples_b}) {
        for (const auto& text : *group) {
            std::string lowered = to_lower(text);
            for (const auto& value : dim.values) {
                if (lowered.find(to_lower(value.phrase)) != std::string::npos &&
                    seen.insert(value.predicate).second) {
                    out.push_back(value.predicate);
                }
            }
        }
    }
    return out;
}

// How uniform the dimension looks: the dominant value share in each group,
// summed. A dimension with one constant value per group scores 2.
double dimension_salience(const DimensionSpec& dim, const ParsedPrompt& pp) {
    auto dominant_share = [&](const std::vector<std::string>& group) {
        if (group.empty()) return 0.0;
        size_t best = 0;
        for (const auto& value : dim.values) {
            size_t n = 0;
            for (const auto& text : group) {
                if (to_lower(text).find(to_lower(value.phrase)) != std::string::npos) ++n;
            }
            best = std::max(best, n);
        }
        return double(best) / double(group.size());
    };
    return dominant_share(pp.samples_a) + dominant_share(pp.samples_b);
}

std::string render_list(const std::vector<std::string>& predicates) {
    std::ostringstream out;
    for (size_t i = 0; i < predicates.size(); ++i) {
        out << (i + 1) << ". " << predicates[i] << "\n";
    }
    return out.str();
}

// Arbitrary (non-inventory) samples: brainstorm from the words most skewed
// toward group A.
std::vector<std::string> skewed_word_predicates(const ParsedPrompt& pp) {
    std::map<std::string, int> diff;
    for (const auto& text : pp.samples_a) {
        for (auto& w : word_tokens(text)) ++diff[w];
    }
    for (const auto& text : pp.samples_b) {
        for (auto& w : word_tokens(text)) --diff[w];
    }
    std::vector<std::pair<std::string, int>> ranked(diff.begin(), diff.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    std::vector<std::string> out;
    for (const auto& [word, d] : ranked) {
        if (d <= 0 || word.size() < 3 || out.size() >= 5) break;
        out.push_back("mentions " + word);
    }
    return out;
}

} // namespace

std::string MockGateway::strip_comparative(const std::string& hypothesis_text) {
    std::string text = trim(hypothesis_text);
    // "is more likely to include X" -> "includes X"
    for (const char* prefix : {"is more likely to ", "is less likely to ",
                               "are more likely to ", "are less likely to "}) {
        if (to_lower(text).rfind(prefix, 0) == 0) {
            std::string rest = text.substr(std::string(prefix).size());
            auto space = rest.find(' ');
            std::string verb = space == std::string::npos ? rest : rest.substr(0, space);
            std::string tail = space == std::string::npos ? "" : rest.substr(space);
            return verb + "s" + tail;
        }
    }
    // Otherwise drop bare comparative markers.
    std::istringstream ss(text);
    std::string word, out;
    while (ss >> word) {
        std::string bare = to_lower(word);
        while (!bare.empty() && !std::isalnum(static_cast<unsigned char>(bare.back())))
            bare.pop_back();
        if (bare == "more" || bare == "less" || bare == "fewer" || bare == "most" ||
            bare == "least")
            continue;
        if (!out.empty()) out += ' ';
        out += word;
    }
    return out;
}

std::string MockGateway::complete(const CompletionRequest& request) {
    if (request.prompt.empty()) throw Error("complete: empty prompt");
    for (const auto& [needle, response] : completion_rules) {
        if (request.prompt.find(needle) != std::string::npos) return response;
    }

    if (request.prompt.rfind("Rewrite the hypothesis", 0) == 0) {
        // Pull the last "Hypothesis: ..." line.
        auto pos = request.prompt.rfind("Hypothesis: ");
        auto end = request.prompt.find('\n', pos);
        std::string hyp = request.prompt.substr(pos + 12, end - pos - 12);
        return strip_comparative(hyp);
    }

    if (auto pp = parse_proposer_prompt(request.prompt)) {
        const auto& dims = builtin_dimensions();
        // Goal names a dimension -> propose only from it.
        for (const auto& dim : dims) {
            if (pp->goal.find("in terms of " + dim.name) != std::string::npos) {
                auto predicates = predicates_for_dimension(dim, *pp);
                if (predicates.empty()) predicates = skewed_word_predicates(*pp);
                return render_list(predicates);
            }
        }
        // No usable goal: brainstorm every dimension, most uniform first.
        std::vector<const DimensionSpec*> order;
        for (const auto& dim : dims) order.push_back(&dim);
        std::stable_sort(order.begin(), order.end(),
                         [&](const DimensionSpec* x, const DimensionSpec* y) {
                             double sx = dimension_salience(*x, *pp);
                             double sy = dimension_salience(*y, *pp);
                             if (sx != sy) return sx > sy;
                             return x->name < y->name;
                         });
        std::vector<std::string> predicates;
        for (const auto* dim : order) {
            for (auto& p : predicates_for_dimension(*dim, *pp)) predicates.push_back(std::move(p));
        }
        if (predicates.empty()) predicates = skewed_word_predicates(*pp);
        return render_list(predicates);
    }

    return "";
}

JudgedScore MockGateway::judge_truth(const Hypothesis& hypothesis, const TextSample& sample) {
    if (unparseable_hypotheses.count(hypothesis.text))
        throw UnparseableOutput("unparseable truth judgment", "mock gibberish");
    if (constant_truth_weights) {
        auto [affirm, negate] = *constant_truth_weights;
        return {affirm / (affirm + negate), id()};
    }
    for (const auto& rule : truth_rules) {
        if (!contains_ci(hypothesis.text, rule.predicate_contains)) continue;
        for (const auto& kw : rule.keywords) {
            if (contains_ci(sample.text, kw)) return {1.0, id()};
        }
        return {0.0, id()};
    }
    // Synthetic-inventory predicates match on their marker phrase.
    for (const auto& dim : builtin_dimensions()) {
        for (const auto& value : dim.values) {
            if (normalize_predicate(hypothesis.text) == normalize_predicate(value.predicate)) {
                return {contains_ci(sample.text, value.phrase) ? 1.0 : 0.0, id()};
            }
        }
    }
    // Fallback: last content word of the predicate.
    auto words = word_tokens(hypothesis.text);
    if (words.empty()) return {0.0, id()};
    auto sample_words = word_tokens(sample.text);
    bool hit = std::find(sample_words.begin(), sample_words.end(), words.back()) !=
               sample_words.end();
    return {hit ? 1.0 : 0.0, id()};
}

EquivalenceLabel MockGateway::judge_equivalence(const std::string& candidate,
                                                const std::string& reference) {
    if (candidate.empty() || reference.empty())
        throw Error("judge_equivalence: empty predicate");
    if (normalize_predicate(candidate) == normalize_predicate(reference))
        return EquivalenceLabel::Equivalent;
    if (similar_overlap_threshold >= 0.0) {
        auto aw = word_tokens(candidate);
        auto bw = word_tokens(reference);
        std::set<std::string> sa(aw.begin(), aw.end()), sb(bw.begin(), bw.end());
        size_t inter = 0;
        for (const auto& w : sa) inter += sb.count(w);
        size_t uni = sa.size() + sb.size() - inter;
        if (uni > 0 && double(inter) / double(uni) >= similar_overlap_threshold)
            return EquivalenceLabel::Similar;
    }
    return EquivalenceLabel::Irrelevant;
}

int MockGateway::rate_rubric(const std::string& goal, const Hypothesis& hypothesis,
                             RubricKind rubric) {
    (void)goal;
    (void)rubric;
    auto it = rubric_by_hypothesis.find(hypothesis.text);
    if (it != rubric_by_hypothesis.end()) return it->second;
    return default_rubric_rating;
}

} // namespace corpusdiff
