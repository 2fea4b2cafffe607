#include "corpusdiff/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/util.hpp"

namespace corpusdiff {

namespace {

DimensionSpec make_dim(const std::string& name, const std::string& predicate_prefix,
                       std::initializer_list<const char*> phrases) {
    DimensionSpec d;
    d.name = name;
    for (const char* phrase : phrases) {
        d.values.push_back({phrase, predicate_prefix + phrase});
    }
    return d;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

} // namespace

const std::vector<DimensionSpec>& builtin_dimensions() {
    static const std::vector<DimensionSpec> dims = {
        make_dim("topic", "has a topic of ",
                 {"space exploration", "celebrity romance", "tax reform", "street food",
                  "vintage cars", "quantum computing", "garden design", "ocean wildlife",
                  "board games", "ancient ruins", "marathon training", "home robotics",
                  "climate policy", "desert geology"}),
        make_dim("genre", "has a genre of ",
                 {"news report", "product review", "diary entry", "technical manual",
                  "campfire story", "courtroom transcript", "recipe card",
                  "travel brochure", "stand-up monologue"}),
        make_dim("language", "is written in ",
                 {"English", "French", "Spanish", "German", "Italian", "Portuguese",
                  "Dutch"}),
    };
    return dims;
}

namespace {

// Two distinct indices drawn from [0, n).
std::pair<size_t, size_t> draw_two(std::mt19937_64& rng, size_t n) {
    size_t i = rand_index(rng, n);
    size_t j = rand_index(rng, n - 1);
    if (j >= i) ++j;
    return {i, j};
}

std::string render_sample_text(int index, const std::string& corpus_label,
                               const std::vector<std::pair<std::string, std::string>>& attrs) {
    // attrs: (dimension name, value phrase), in dimension order.
    std::ostringstream out;
    out << "note " << corpus_label << index << ":";
    bool first = true;
    for (const auto& [dim, phrase] : attrs) {
        out << (first ? " " : ", ");
        first = false;
        if (dim == "topic") out << "talking about " << phrase;
        else if (dim == "genre") out << "presented as a " << phrase;
        else if (dim == "language") out << "written in " << phrase;
        else out << "with " << dim << " " << phrase;
    }
    out << ".";
    return out.str();
}

} // namespace

namespace {

std::string synthesis_prompt(const std::vector<std::pair<std::string, std::string>>& attrs) {
    std::ostringstream out;
    out << "Write one short text sample";
    for (const auto& [dim, phrase] : attrs) {
        if (dim == "topic") out << ", about " << phrase;
        else if (dim == "genre") out << ", presented as a " << phrase;
        else if (dim == "language") out << ", written in " << phrase;
        else out << ", with " << dim << " " << phrase;
    }
    out << ". Output only the sample text.";
    return out.str();
}

SynProblem generate_impl(uint64_t seed, const std::vector<DimensionSpec>& dims,
                         Gateway* synthesizer);

} // namespace

SynProblem generate_problem(uint64_t seed, const std::vector<DimensionSpec>& dims) {
    return generate_impl(seed, dims, nullptr);
}

SynProblem generate_problem_lm(uint64_t seed, Gateway& gateway,
                               const std::vector<DimensionSpec>& dims) {
    return generate_impl(seed, dims, &gateway);
}

namespace {

SynProblem generate_impl(uint64_t seed, const std::vector<DimensionSpec>& dims,
                         Gateway* synthesizer) {
    if (dims.size() < 2) throw Error("generate_problem: need at least 2 dimensions");
    for (const auto& d : dims) {
        if (d.values.size() < 2)
            throw Error("generate_problem: dimension '" + d.name + "' has < 2 values");
    }

    std::mt19937_64 rng(seed);
    auto [target_idx, distractor_idx] = draw_two(rng, dims.size());
    const DimensionSpec& target = dims[target_idx];
    const DimensionSpec& distractor = dims[distractor_idx];

    auto [tva, tvb] = draw_two(rng, target.values.size());
    auto [dva, dvb] = draw_two(rng, distractor.values.size());

    const double v_choices[3] = {0.6, 0.8, 1.0};
    double v_fraction = v_choices[rand_index(rng, 3)];
    int k_examples = rand_index(rng, 2) == 0 ? 0 : 2;

    const int n_samples = 10;
    const int n_satisfy = int(std::lround(10.0 * v_fraction));

    SynProblem sp;
    sp.seed = seed;
    sp.target_dimension = target.name;
    sp.distractor_dimension = distractor.name;
    sp.v_fraction = v_fraction;
    sp.k_examples = k_examples;
    sp.reference_a = target.values[tva].predicate;
    sp.reference_b = target.values[tvb].predicate;
    sp.target_phrases = {target.values[tva].phrase, target.values[tvb].phrase};
    sp.distractor_phrases = {distractor.values[dva].phrase, distractor.values[dvb].phrase};
    sp.templated = synthesizer == nullptr;

    // Target values other than the two references, for non-satisfying samples
    // and example hypotheses.
    std::vector<size_t> filler_values;
    for (size_t i = 0; i < target.values.size(); ++i) {
        if (i != tva && i != tvb) filler_values.push_back(i);
    }

    auto build_corpus = [&](const std::string& label, size_t own_target,
                            size_t own_distractor) {
        std::vector<bool> satisfies(n_samples, false);
        for (int i = 0; i < n_satisfy; ++i) satisfies[size_t(i)] = true;
        deterministic_shuffle(satisfies, rng);

        auto fillers = filler_values;
        deterministic_shuffle(fillers, rng);

        Corpus corpus;
        corpus.label = label;
        size_t filler_at = 0;
        for (int i = 0; i < n_samples; ++i) {
            std::vector<std::pair<std::string, std::string>> attrs;
            for (const auto& d : dims) {
                std::string phrase;
                if (&d == &target) {
                    if (satisfies[size_t(i)]) {
                        phrase = target.values[own_target].phrase;
                    } else {
                        phrase = target.values[fillers[filler_at % fillers.size()]].phrase;
                        ++filler_at;
                    }
                } else if (&d == &distractor) {
                    phrase = distractor.values[own_distractor].phrase;
                } else {
                    phrase = d.values[rand_index(rng, d.values.size())].phrase;
                }
                attrs.emplace_back(d.name, phrase);
            }
            TextSample s;
            s.id = label + "-" + std::to_string(i + 1);
            if (synthesizer) {
                CompletionRequest req;
                req.prompt = synthesis_prompt(attrs);
                req.max_output_tokens = 128;
                req.temperature = 0.0;
                s.text = trim(synthesizer->complete(req));
            }
            if (s.text.empty()) s.text = render_sample_text(i + 1, label, attrs);
            for (const auto& [dim, phrase] : attrs) sp.sample_attrs[s.id][dim] = phrase;
            corpus.samples.push_back(std::move(s));
        }
        return corpus;
    };

    Corpus corpus_a = build_corpus("A", tva, dva);
    Corpus corpus_b = build_corpus("B", tvb, dvb);

    sp.problem.goal = "understand how Corpus A differs from Corpus B in terms of " + target.name;
    sp.problem.corpus_a = split_corpus(corpus_a, seed ^ 0x9e3779b97f4a7c15ull);
    sp.problem.corpus_b = split_corpus(corpus_b, seed ^ 0xc2b2ae3d27d4eb4full);

    if (k_examples > 0) {
        auto pool = filler_values;
        deterministic_shuffle(pool, rng);
        for (int i = 0; i < k_examples && size_t(i) < pool.size(); ++i) {
            sp.problem.example_hypotheses.push_back(target.values[pool[size_t(i)]].predicate);
        }
    }
    return sp;
}

} // namespace

std::vector<SynProblem> generate_suite(int n, uint64_t seed,
                                       const std::vector<DimensionSpec>& dims) {
    if (n < 1) throw Error("generate_suite: n must be >= 1");
    std::vector<SynProblem> suite;
    suite.reserve(size_t(n));
    for (int i = 0; i < n; ++i) suite.push_back(generate_problem(seed + uint64_t(i), dims));
    return suite;
}

namespace {

nlohmann::ordered_json syn_to_json(const SynProblem& sp) {
    nlohmann::ordered_json j;
    j["seed"] = sp.seed;
    j["target_dimension"] = sp.target_dimension;
    j["distractor_dimension"] = sp.distractor_dimension;
    j["v_fraction"] = sp.v_fraction;
    j["k_examples"] = sp.k_examples;
    j["reference_a"] = sp.reference_a;
    j["reference_b"] = sp.reference_b;
    j["target_phrases"] = sp.target_phrases;
    j["distractor_phrases"] = sp.distractor_phrases;
    j["templated"] = sp.templated;
    j["sample_attrs"] = sp.sample_attrs;
    j["problem"] = nlohmann::ordered_json::parse(problem_to_json(sp.problem));
    return j;
}

SynProblem syn_from_json(const nlohmann::json& j) {
    SynProblem sp;
    sp.seed = j.at("seed").get<uint64_t>();
    sp.target_dimension = j.at("target_dimension").get<std::string>();
    sp.distractor_dimension = j.at("distractor_dimension").get<std::string>();
    sp.v_fraction = j.at("v_fraction").get<double>();
    sp.k_examples = j.at("k_examples").get<int>();
    sp.reference_a = j.at("reference_a").get<std::string>();
    sp.reference_b = j.at("reference_b").get<std::string>();
    sp.target_phrases = j.at("target_phrases").get<std::array<std::string, 2>>();
    sp.distractor_phrases = j.at("distractor_phrases").get<std::array<std::string, 2>>();
    sp.templated = j.value("templated", true);
    if (j.contains("sample_attrs")) {
        sp.sample_attrs =
            j["sample_attrs"]
                .get<std::map<std::string, std::map<std::string, std::string>>>();
    }
    sp.problem = problem_from_json(j.at("problem").dump());
    return sp;
}

} // namespace

void save_suite(const std::filesystem::path& path, const std::vector<SynProblem>& suite) {
    std::ostringstream out;
    for (const auto& sp : suite) out << syn_to_json(sp).dump() << "\n";
    write_file(path, out.str());
}

std::vector<SynProblem> load_suite(const std::filesystem::path& path) {
    std::vector<SynProblem> suite;
    for_each_line(path, [&](size_t line_no, const std::string& line) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ManifestError("suite line " + std::to_string(line_no) + ": malformed JSON");
        suite.push_back(syn_from_json(j));
    });
    if (suite.empty()) throw ManifestError("empty suite file: " + path.string());
    return suite;
}

ConstructionCheck check_construction(const SynProblem& sp) {
    auto all_samples = [&](const SplitCorpus& sc) {
        std::vector<const TextSample*> out;
        for (const auto& s : sc.exploration.samples) out.push_back(&s);
        for (const auto& s : sc.validation.samples) out.push_back(&s);
        return out;
    };
    auto satisfies = [&](const TextSample& s, const std::string& dim,
                         const std::string& phrase) {
        if (sp.templated) return contains_ci(s.text, phrase);
        auto sit = sp.sample_attrs.find(s.id);
        if (sit == sp.sample_attrs.end()) return false;
        auto dit = sit->second.find(dim);
        return dit != sit->second.end() && dit->second == phrase;
    };

    ConstructionCheck check;
    check.distractor_pure = true;
    check.target_fraction_ok = true;
    const int expected = int(std::lround(10.0 * sp.v_fraction));

    const SplitCorpus* corpora[2] = {&sp.problem.corpus_a, &sp.problem.corpus_b};
    for (int side = 0; side < 2; ++side) {
        auto samples = all_samples(*corpora[side]);
        int target_hits = 0;
        for (const auto* s : samples) {
            if (!satisfies(*s, sp.distractor_dimension, sp.distractor_phrases[size_t(side)]))
                check.distractor_pure = false;
            if (satisfies(*s, sp.distractor_dimension, sp.distractor_phrases[size_t(1 - side)]))
                check.distractor_pure = false;
            if (satisfies(*s, sp.target_dimension, sp.target_phrases[size_t(side)]))
                ++target_hits;
        }
        if (int(samples.size()) != 10 || target_hits != expected)
            check.target_fraction_ok = false;
    }
    return check;
}

bool grade(const Hypothesis& output, const std::string& reference, Gateway& gateway,
           GradeMode mode) {
    EquivalenceLabel verdict = gateway.judge_equivalence(output.text, reference);
    if (verdict == EquivalenceLabel::Equivalent) return true;
    return mode == GradeMode::EquivalentOrSimilar && verdict == EquivalenceLabel::Similar;
}

AccuracyReport grade_suite(const std::vector<std::optional<Hypothesis>>& outputs,
                           const std::vector<SynProblem>& suite, Gateway& gateway,
                           GradeMode mode) {
    if (outputs.size() != suite.size())
        throw Error("grade_suite: outputs and suite size mismatch");
    AccuracyReport report;
    report.n = int(suite.size());
    for (size_t i = 0; i < suite.size(); ++i) {
        if (!outputs[i]) {
            ++report.missing;
            continue;
        }
        const std::string& reference = outputs[i]->direction == Direction::AOverB
                                           ? suite[i].reference_a
                                           : suite[i].reference_b;
        if (grade(*outputs[i], reference, gateway, mode)) ++report.correct;
    }
    report.accuracy = report.n == 0 ? 0.0 : double(report.correct) / double(report.n);
    return report;
}

std::vector<SynProblem> import_labeled(const std::filesystem::path& path,
                                       const std::string& dim1, const std::string& dim2,
                                       int n, uint64_t seed) {
    struct Row {
        std::string text;
        std::string label1;
        std::string label2;
    };
    std::vector<Row> rows;
    for_each_line(path, [&](size_t line_no, const std::string& line) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j.contains(dim1) ||
            !j.contains(dim2)) {
            throw ManifestError("labeled line " + std::to_string(line_no) +
                                ": expected text, " + dim1 + ", " + dim2);
        }
        rows.push_back({j["text"].get<std::string>(), j[dim1].get<std::string>(),
                        j[dim2].get<std::string>()});
    });

    // Observed labels become the dimension values; the predicate is templated
    // from the column name.
    auto collect_values = [&](bool first_dim) {
        DimensionSpec spec;
        spec.name = first_dim ? dim1 : dim2;
        std::set<std::string> seen;
        for (const auto& r : rows) {
            const std::string& label = first_dim ? r.label1 : r.label2;
            if (seen.insert(label).second)
                spec.values.push_back({label, "has a " + spec.name + " of " + label});
        }
        std::sort(spec.values.begin(), spec.values.end(),
                  [](const auto& x, const auto& y) { return x.phrase < y.phrase; });
        return spec;
    };
    std::vector<DimensionSpec> dims = {collect_values(true), collect_values(false)};
    for (const auto& d : dims) {
        if (d.values.size() < 2)
            throw ManifestError("import: dimension '" + d.name + "' has < 2 values");
    }

    std::mt19937_64 rng(seed);
    std::vector<SynProblem> suite;
    const int max_attempts = n * 200;
    for (int attempt = 0; attempt < max_attempts && int(suite.size()) < n; ++attempt) {
        size_t target_idx = rand_index(rng, 2);
        const DimensionSpec& target = dims[target_idx];
        const DimensionSpec& distractor = dims[1 - target_idx];
        auto [tva, tvb] = draw_two(rng, target.values.size());
        auto [dva, dvb] = draw_two(rng, distractor.values.size());
        const double v_choices[3] = {0.6, 0.8, 1.0};
        double v_fraction = v_choices[rand_index(rng, 3)];
        int k_examples = rand_index(rng, 2) == 0 ? 0 : 2;
        int n_satisfy = int(std::lround(10.0 * v_fraction));

        auto label_of = [&](const Row& r, const DimensionSpec& d) {
            return d.name == dim1 ? r.label1 : r.label2;
        };
        auto gather = [&](size_t own_target, size_t own_distractor, bool satisfying) {
            std::vector<size_t> idx;
            for (size_t i = 0; i < rows.size(); ++i) {
                if (label_of(rows[i], distractor) != distractor.values[own_distractor].phrase)
                    continue;
                const std::string& t = label_of(rows[i], target);
                bool is_ref = t == target.values[own_target].phrase;
                bool is_other_ref = t == target.values[own_target == tva ? tvb : tva].phrase;
                if (satisfying ? is_ref : (!is_ref && !is_other_ref)) idx.push_back(i);
            }
            return idx;
        };

        bool feasible = true;
        SynProblem sp;
        sp.seed = seed + uint64_t(attempt);
        sp.templated = false;
        sp.target_dimension = target.name;
        sp.distractor_dimension = distractor.name;
        sp.v_fraction = v_fraction;
        sp.k_examples = k_examples;
        sp.reference_a = target.values[tva].predicate;
        sp.reference_b = target.values[tvb].predicate;
        sp.target_phrases = {target.values[tva].phrase, target.values[tvb].phrase};
        sp.distractor_phrases = {distractor.values[dva].phrase, distractor.values[dvb].phrase};

        Corpus corpora[2];
        for (int side = 0; side < 2 && feasible; ++side) {
            size_t own_target = side == 0 ? tva : tvb;
            size_t own_distractor = side == 0 ? dva : dvb;
            auto sat = gather(own_target, own_distractor, true);
            auto fill = gather(own_target, own_distractor, false);
            if (int(sat.size()) < n_satisfy || int(fill.size()) < 10 - n_satisfy) {
                feasible = false;
                break;
            }
            deterministic_shuffle(sat, rng);
            deterministic_shuffle(fill, rng);
            std::vector<size_t> chosen(sat.begin(), sat.begin() + n_satisfy);
            chosen.insert(chosen.end(), fill.begin(), fill.begin() + (10 - n_satisfy));
            deterministic_shuffle(chosen, rng);

            Corpus& corpus = corpora[side];
            corpus.label = side == 0 ? "A" : "B";
            for (size_t i = 0; i < chosen.size(); ++i) {
                const Row& r = rows[chosen[i]];
                TextSample s;
                s.id = corpus.label + "-" + std::to_string(i + 1);
                s.text = r.text;
                sp.sample_attrs[s.id][dim1] = r.label1;
                sp.sample_attrs[s.id][dim2] = r.label2;
                corpus.samples.push_back(std::move(s));
            }
        }
        if (!feasible) continue;

        sp.problem.goal =
            "understand how Corpus A differs from Corpus B in terms of " + target.name;
        sp.problem.corpus_a = split_corpus(corpora[0], sp.seed ^ 0x9e3779b97f4a7c15ull);
        sp.problem.corpus_b = split_corpus(corpora[1], sp.seed ^ 0xc2b2ae3d27d4eb4full);
        if (k_examples > 0) {
            std::vector<size_t> pool;
            for (size_t i = 0; i < target.values.size(); ++i) {
                if (i != tva && i != tvb) pool.push_back(i);
            }
            deterministic_shuffle(pool, rng);
            for (int i = 0; i < k_examples && size_t(i) < pool.size(); ++i) {
                sp.problem.example_hypotheses.push_back(target.values[pool[size_t(i)]].predicate);
            }
        }
        suite.push_back(std::move(sp));
    }
    if (int(suite.size()) < n)
        throw ManifestError("import: insufficient labeled texts for " + std::to_string(n) +
                            " problems (built " + std::to_string(suite.size()) + ")");
    return suite;
}

} // namespace corpusdiff
