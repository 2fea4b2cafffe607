#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/gateway.hpp"
#include "corpusdiff/hypothesis.hpp"

namespace corpusdiff {

/// One value of a difference dimension: the phrase planted verbatim in
/// generated sample texts (the marker) and the predicate describing it.
struct DimensionValue {
    std::string phrase;
    std::string predicate;

    bool operator==(const DimensionValue&) const = default;
};

struct DimensionSpec {
    std::string name;
    std::vector<DimensionValue> values;

    bool operator==(const DimensionSpec&) const = default;
};

/// The built-in topic/genre/language inventory (14/9/7 values).
const std::vector<DimensionSpec>& builtin_dimensions();

/// A diagnostic problem with a known reference difference. The target
/// dimension carries the goal-relevant difference in a v_fraction of each
/// corpus; the distractor dimension differs completely between the corpora.
struct SynProblem {
    Problem problem;
    std::string target_dimension;
    std::string distractor_dimension;
    double v_fraction = 1.0;          // in {0.6, 0.8, 1.0}
    int k_examples = 0;               // in {0, 2}
    std::string reference_a;          // target predicate for corpus A
    std::string reference_b;
    std::array<std::string, 2> target_phrases;     // marker phrases: A, B
    std::array<std::string, 2> distractor_phrases; // marker phrases: A, B
    uint64_t seed = 0;
    bool templated = true; // false when built from imported labeled texts
    // sample id -> dimension name -> value phrase (ground-truth labels)
    std::map<std::string, std::map<std::string, std::string>> sample_attrs;
};

/// Deterministic in seed. Ten samples per corpus; the distractor value is
/// constant within each corpus and differs across corpora; round(10 * v)
/// samples of each corpus satisfy its reference predicate.
SynProblem generate_problem(uint64_t seed,
                            const std::vector<DimensionSpec>& dims = builtin_dimensions());

/// Same recipe, but sample texts come from the backend instead of templates
/// (one completion per sample, prompted from the drawn attribute values).
/// Ground truth lives in sample_attrs; determinism follows the backend's.
SynProblem generate_problem_lm(uint64_t seed, Gateway& gateway,
                               const std::vector<DimensionSpec>& dims = builtin_dimensions());

/// n problems with seeds seed .. seed+n-1.
std::vector<SynProblem> generate_suite(int n, uint64_t seed,
                                       const std::vector<DimensionSpec>& dims = builtin_dimensions());

void save_suite(const std::filesystem::path& path, const std::vector<SynProblem>& suite);
std::vector<SynProblem> load_suite(const std::filesystem::path& path);

/// Builds problems by the same recipe from human-labeled texts. The file is
/// JSON lines {"text", "<dim1>", "<dim2>"}; the two label columns become the
/// candidate dimensions and labels act as markers.
std::vector<SynProblem> import_labeled(const std::filesystem::path& path,
                                       const std::string& dim1, const std::string& dim2,
                                       int n, uint64_t seed);

struct ConstructionCheck {
    bool distractor_pure = false;
    bool target_fraction_ok = false;
    bool ok() const { return distractor_pure && target_fraction_ok; }
};

/// Verifies the construction invariants directly from the marker phrases
/// embedded in the sample texts; no judge involved.
ConstructionCheck check_construction(const SynProblem& sp);

enum class GradeMode { EquivalentOnly, EquivalentOrSimilar };

/// True when the judged verdict clears the mode: equivalent-only accepts only
/// "equivalent"; equivalent-or-similar also accepts "similar".
bool grade(const Hypothesis& output, const std::string& reference, Gateway& gateway,
           GradeMode mode);

struct AccuracyReport {
    int n = 0;
    int correct = 0;
    int missing = 0;
    double accuracy = 0.0;
};

/// Fraction of problems whose output grades as correct. A problem with no
/// output counts as incorrect. The output for a problem is graded against
/// reference_a or reference_b according to its direction.
AccuracyReport grade_suite(const std::vector<std::optional<Hypothesis>>& outputs,
                           const std::vector<SynProblem>& suite, Gateway& gateway,
                           GradeMode mode);

} // namespace corpusdiff
