#include "corpusdiff/corpus.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/util.hpp"

namespace corpusdiff {

using ordered_json = nlohmann::ordered_json;

Problem Problem::swapped() const {
    Problem p;
    p.goal = goal;
    p.corpus_a = corpus_b;
    p.corpus_b = corpus_a;
    p.example_hypotheses = example_hypotheses;
    return p;
}

SplitCorpus split_corpus(const Corpus& corpus, uint64_t seed) {
    if (corpus.empty()) throw ManifestError("split_corpus: empty corpus");
    const size_t n = corpus.size();
    const size_t n_expl = (n + 1) / 2;
    if (n - n_expl == 0) throw ManifestError("split_corpus: validation split empty");

    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    deterministic_shuffle(idx, rng);

    std::vector<bool> in_expl(n, false);
    for (size_t i = 0; i < n_expl; ++i) in_expl[idx[i]] = true;

    SplitCorpus out;
    out.exploration.label = corpus.label;
    out.validation.label = corpus.label;
    for (size_t i = 0; i < n; ++i) {
        (in_expl[i] ? out.exploration : out.validation).samples.push_back(corpus.samples[i]);
    }
    return out;
}

Corpus load_corpus_file(const std::filesystem::path& path, const std::string& label) {
    Corpus corpus;
    corpus.label = label;

    // Sniff the format from the first non-empty line.
    bool jsonl = false;
    bool decided = false;
    std::vector<std::pair<size_t, std::string>> lines;
    for_each_line(path, [&](size_t n, const std::string& line) {
        lines.emplace_back(n, line);
    });
    if (lines.empty()) throw ManifestError("empty corpus file: " + path.string());
    {
        auto probe = nlohmann::json::parse(lines.front().second, nullptr, false);
        jsonl = probe.is_object() && probe.contains("text");
        decided = true;
    }
    (void)decided;

    std::unordered_set<std::string> seen_text;
    std::unordered_set<std::string> seen_ids;
    for (const auto& [line_no, line] : lines) {
        std::string id;
        std::string text;
        if (jsonl) {
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
                throw ManifestError("corpus line " + std::to_string(line_no) +
                                    ": missing text field in " + path.string());
            }
            text = trim(j["text"].get<std::string>());
            if (j.contains("id")) id = j["id"].get<std::string>();
        } else {
            text = trim(line);
        }
        if (text.empty()) continue;
        if (!seen_text.insert(text).second) continue; // exact-duplicate removal
        if (id.empty()) id = label + "-" + std::to_string(line_no);
        if (!seen_ids.insert(id).second) {
            throw ManifestError("duplicate sample id '" + id + "' in " + path.string());
        }
        corpus.samples.push_back({std::move(id), std::move(text)});
    }
    if (corpus.empty()) throw ManifestError("empty corpus: " + path.string());
    return corpus;
}

namespace {

ordered_json corpus_to_json(const Corpus& c) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : c.samples) arr.push_back({{"id", s.id}, {"text", s.text}});
    return arr;
}

Corpus corpus_from_json(const nlohmann::json& arr, const std::string& label) {
    Corpus c;
    c.label = label;
    for (const auto& j : arr) {
        c.samples.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>()});
    }
    return c;
}

SplitCorpus split_from_inline(const nlohmann::json& j, const std::string& label) {
    SplitCorpus sc;
    sc.exploration = corpus_from_json(j.at("exploration"), label);
    sc.validation = corpus_from_json(j.at("validation"), label);
    return sc;
}

SplitCorpus apply_explicit_split(const Corpus& corpus, const nlohmann::json& split_spec) {
    std::unordered_set<std::string> expl_ids, val_ids;
    for (const auto& id : split_spec.at("exploration")) expl_ids.insert(id.get<std::string>());
    for (const auto& id : split_spec.at("validation")) val_ids.insert(id.get<std::string>());
    SplitCorpus out;
    out.exploration.label = corpus.label;
    out.validation.label = corpus.label;
    for (const auto& s : corpus.samples) {
        if (expl_ids.count(s.id)) out.exploration.samples.push_back(s);
        else if (val_ids.count(s.id)) out.validation.samples.push_back(s);
    }
    if (out.exploration.empty())
        throw ManifestError("explicit split: empty exploration for corpus " + corpus.label);
    if (out.validation.empty())
        throw ManifestError("explicit split: empty validation for corpus " + corpus.label);
    return out;
}

void check_problem(const Problem& p) {
    if (p.goal.empty()) throw ManifestError("missing goal");
    for (const SplitCorpus* sc : {&p.corpus_a, &p.corpus_b}) {
        if (sc->exploration.empty() || sc->validation.empty())
            throw ManifestError("empty corpus split for corpus " + sc->exploration.label);
        std::unordered_set<std::string> expl_ids;
        for (const auto& s : sc->exploration.samples) expl_ids.insert(s.id);
        for (const auto& s : sc->validation.samples) {
            if (expl_ids.count(s.id))
                throw ManifestError("splits overlap on id '" + s.id + "'");
        }
    }
}

} // namespace

Problem load_problem(const std::filesystem::path& manifest_path) {
    auto doc = nlohmann::json::parse(read_file(manifest_path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ManifestError("malformed manifest: " + manifest_path.string());
    if (!doc.contains("goal") || !doc["goal"].is_string() ||
        trim(doc["goal"].get<std::string>()).empty())
        throw ManifestError("missing goal");
    for (const char* key : {"corpus_a", "corpus_b"}) {
        if (!doc.contains(key)) throw ManifestError(std::string("missing ") + key);
    }

    Problem p;
    p.goal = trim(doc["goal"].get<std::string>());
    if (doc.contains("example_hypotheses")) {
        for (const auto& h : doc["example_hypotheses"]) {
            p.example_hypotheses.push_back(h.get<std::string>());
        }
    }

    uint64_t seed = doc.value("split_seed", uint64_t{0});
    auto base = manifest_path.parent_path();

    auto material = [&](const char* key, const std::string& label) -> SplitCorpus {
        const auto& node = doc[key];
        if (node.is_object()) return split_from_inline(node, label);
        if (!node.is_string())
            throw ManifestError(std::string("malformed ") + key + ": expected path or object");
        auto corpus_path = std::filesystem::path(node.get<std::string>());
        if (corpus_path.is_relative()) corpus_path = base / corpus_path;
        Corpus corpus = load_corpus_file(corpus_path, label);
        if (doc.contains("explicit_splits") && doc["explicit_splits"].contains(key)) {
            return apply_explicit_split(corpus, doc["explicit_splits"][key]);
        }
        // Distinct stream per corpus so A and B don't share a shuffle.
        return split_corpus(corpus, seed ^ std::hash<std::string>{}(label));
    };

    p.corpus_a = material("corpus_a", "A");
    p.corpus_b = material("corpus_b", "B");
    check_problem(p);
    return p;
}

std::string problem_to_json(const Problem& p) {
    ordered_json doc;
    doc["goal"] = p.goal;
    doc["corpus_a"] = {{"exploration", corpus_to_json(p.corpus_a.exploration)},
                       {"validation", corpus_to_json(p.corpus_a.validation)}};
    doc["corpus_b"] = {{"exploration", corpus_to_json(p.corpus_b.exploration)},
                       {"validation", corpus_to_json(p.corpus_b.validation)}};
    doc["example_hypotheses"] = p.example_hypotheses;
    return doc.dump(2);
}

Problem problem_from_json(const std::string& json_text) {
    auto doc = nlohmann::json::parse(json_text);
    Problem p;
    p.goal = doc.at("goal").get<std::string>();
    p.corpus_a = split_from_inline(doc.at("corpus_a"), "A");
    p.corpus_b = split_from_inline(doc.at("corpus_b"), "B");
    if (doc.contains("example_hypotheses")) {
        for (const auto& h : doc["example_hypotheses"]) {
            p.example_hypotheses.push_back(h.get<std::string>());
        }
    }
    check_problem(p);
    return p;
}

void save_problem(const std::filesystem::path& path, const Problem& problem) {
    write_file(path, problem_to_json(problem));
}

} // namespace corpusdiff
