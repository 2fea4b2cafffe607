#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace corpusdiff {

struct TextSample {
    std::string id;
    std::string text;

    bool operator==(const TextSample&) const = default;
};

/// An ordered collection of samples with distinct ids. Order is deterministic
/// given the input file. Immutable after construction by convention.
struct Corpus {
    std::string label; // "A" or "B"
    std::vector<TextSample> samples;

    bool operator==(const Corpus&) const = default;
    bool empty() const { return samples.empty(); }
    size_t size() const { return samples.size(); }
};

struct SplitCorpus {
    Corpus exploration;
    Corpus validation;

    bool operator==(const SplitCorpus&) const = default;
};

struct Problem {
    std::string goal;
    SplitCorpus corpus_a;
    SplitCorpus corpus_b;
    std::vector<std::string> example_hypotheses;

    bool operator==(const Problem&) const = default;

    // Same problem viewed with the corpora exchanged.
    Problem swapped() const;
};

/// Deterministic pseudo-random 50/50 partition; exploration gets ceil(n/2).
/// Sample order within each half follows the corpus order. Errors when the
/// corpus is empty or the validation half would be empty.
SplitCorpus split_corpus(const Corpus& corpus, uint64_t seed);

/// Reads a corpus file. JSON-lines mode expects one object per line with a
/// "text" field and an optional "id"; plain-text mode takes one sample per
/// line. Missing ids become "<label>-<line>". Samples are trimmed and exact
/// duplicates (by text) are dropped.
Corpus load_corpus_file(const std::filesystem::path& path, const std::string& label);

/// Materializes a Problem from a manifest. The manifest is a JSON document
/// with "goal", "corpus_a"/"corpus_b" (file paths, or inline split objects),
/// optional "split_seed", optional "explicit_splits" keyed by corpus with
/// id lists, and optional "example_hypotheses".
Problem load_problem(const std::filesystem::path& manifest_path);

/// Writes a Problem as a self-contained JSON document (inline splits) that
/// load_problem accepts.
void save_problem(const std::filesystem::path& path, const Problem& problem);

std::string problem_to_json(const Problem& problem);
Problem problem_from_json(const std::string& json_text);

} // namespace corpusdiff
