#include "corpusdiff/prompts.hpp"

#include <sstream>

#include "corpusdiff/util.hpp"

namespace corpusdiff::prompts {

const char* const RESOURCE_VERSION = "1";

namespace {

const char* const GENERIC_GOAL =
    "I want to understand how Corpus A is different from Corpus B.";

const char* const PROPOSER_HEADER =
    "The following are text samples drawn from two corpora.\n";

const char* const PROPOSER_INSTRUCTION =
    "Propose hypotheses about what kinds of samples appear more often in Corpus A "
    "than in Corpus B. Each hypothesis must be a short predicate that can be checked "
    "against a single text sample, for example \"mentions a family member\". "
    "Answer with a numbered list, one hypothesis per line.";

const char* const TRUTH_TEMPLATE =
    "Check whether the TEXT satisfies the PROPERTY. Respond with Yes or No.\n"
    "\n"
    "PROPERTY: {property}\n"
    "TEXT: {text}\n"
    "\n"
    "Answer:";

const char* const EQUIVALENCE_TEMPLATE =
    "Is text_a and text_b similar in meaning? respond with yes, related, or no.\n"
    "\n"
    "Here are a few examples.\n"
    "Example 1:\n"
    "text_a: has a topic of protecting the environment\n"
    "text_b: has a topic of environmental protection and sustainability\n"
    "output: yes\n"
    "\n"
    "Example 2:\n"
    "text_a: has a language of German\n"
    "text_b: has a language of Deutsch\n"
    "output: yes\n"
    "\n"
    "Example 3:\n"
    "text_a: has a topic of the relation between political figures\n"
    "text_b: has a topic of international diplomacy\n"
    "output: related\n"
    "\n"
    "Example 4:\n"
    "text_a: has a topic of the sports\n"
    "text_b: has a topic of sports team recruiting new members\n"
    "output: related\n"
    "\n"
    "Example 5:\n"
    "text_a: has a named language of Korean\n"
    "text_b: uses archaic and poetic diction\n"
    "output: no\n"
    "\n"
    "Example 6:\n"
    "text_a: has a named language of Korean\n"
    "text_b: has a named language of Japanese\n"
    "output: no\n"
    "\n"
    "Target:\n"
    "text_a: {candidate}\n"
    "text_b: {reference}\n"
    "output:";

const char* const REWRITE_TEMPLATE =
    "Rewrite the hypothesis so that it makes no comparison between groups and can be "
    "checked against a single text sample. Keep the meaning otherwise unchanged.\n"
    "\n"
    "Hypothesis: is more likely to include slang or colloquial terms.\n"
    "Rewritten: includes slang or colloquial terms.\n"
    "\n"
    "Hypothesis: {hypothesis}\n"
    "Rewritten:";

const char* const RELEVANCE_RUBRIC =
    "Rate how relevant the discovery is to the exploration goal. Answer with a single "
    "digit: 2, 1, or 0.\n"
    "2 means relevant. Example: for the goal of understanding what writing style is "
    "convincing, the discovery \"write in first person\" is directly related to the "
    "writing style.\n"
    "1 means indirectly relevant. Example: the discovery \"use the word 'I'\" is not "
    "exactly a writing style, but can still inform the relevant underlying principle "
    "of \"write in first person\".\n"
    "0 means irrelevant. Example: the discovery \"argue for abortion\" does not tell "
    "us about the underlying writing style.";

const char* const NOVELTY_RUBRIC =
    "Rate how difficult it would be to come up with the discovery before looking at "
    "any data. Answer with a single digit: 2, 1, or 0.\n"
    "2 means novel. Example: for an airline manager comparing negative reviews with "
    "positive reviews, the discovery \"mention a language barrier with the crew "
    "members\" is specific and hard to think of without looking at the data.\n"
    "1 means somewhat novel. Example: the discovery \"complain about the crew "
    "members\" is not entirely novel, but is not tautologically true and hence "
    "requires confirmation.\n"
    "0 means not novel. Example: the discovery \"contain more negative language\" is "
    "almost certain for negative reviews.";

const char* const SIGNIFICANCE_RUBRIC =
    "Rate how beneficial it would be to learn the discovery for the first time, given "
    "the exploration goal. Answer with a single digit: 2, 1, or 0.\n"
    "2 means significant. Example: for a retailer comparing negative reviews with "
    "positive reviews, the discovery \"says the wrench is missing\" can lead to "
    "concrete actions for improvement.\n"
    "1 means somewhat significant. Example: the discovery \"asks for a more durable "
    "product\" gives some hints about how to improve the product, but is not "
    "sufficiently helpful on its own.\n"
    "0 means insignificant. Example: the discovery \"accuses the team pushing out a "
    "bad product\" cannot direct the retailer to improve the product.";

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        text.replace(pos, key.size(), value);
        pos += value.size();
    }
    return text;
}

void append_numbered(std::ostringstream& out, const std::vector<TextSample>& samples) {
    for (size_t i = 0; i < samples.size(); ++i) {
        out << (i + 1) << ". " << samples[i].text << "\n";
    }
}

const char* rubric_text(RubricKind kind) {
    switch (kind) {
        case RubricKind::Relevance: return RELEVANCE_RUBRIC;
        case RubricKind::Novelty: return NOVELTY_RUBRIC;
        default: return SIGNIFICANCE_RUBRIC;
    }
}

} // namespace

const std::string& generic_goal_sentence() {
    static const std::string s = GENERIC_GOAL;
    return s;
}

std::string render_proposer(const std::string& goal,
                            const std::vector<TextSample>& samples_a,
                            const std::vector<TextSample>& samples_b,
                            const std::vector<std::string>& example_hypotheses) {
    std::ostringstream out;
    out << PROPOSER_HEADER << "\n";
    out << "Samples from Corpus A:\n";
    append_numbered(out, samples_a);
    out << "\n";
    out << "Samples from Corpus B:\n";
    append_numbered(out, samples_b);
    out << "\n";
    out << "Exploration goal: " << goal << "\n";
    out << "\n";
    out << PROPOSER_INSTRUCTION;
    if (!example_hypotheses.empty()) {
        out << " For example:";
        for (size_t i = 0; i < example_hypotheses.size(); ++i) {
            out << " " << (i + 1) << ". " << example_hypotheses[i];
        }
    }
    out << "\n";
    return out.str();
}

std::string render_truth(const std::string& hypothesis_text, const std::string& sample_text) {
    return replace_all(replace_all(TRUTH_TEMPLATE, "{property}", hypothesis_text),
                       "{text}", sample_text);
}

std::string render_equivalence(const std::string& candidate, const std::string& reference) {
    return replace_all(replace_all(EQUIVALENCE_TEMPLATE, "{candidate}", candidate),
                       "{reference}", reference);
}

std::string render_rewrite(const std::string& hypothesis_text) {
    return replace_all(REWRITE_TEMPLATE, "{hypothesis}", hypothesis_text);
}

std::string render_rubric(RubricKind kind, const std::string& goal,
                          const std::string& hypothesis_text) {
    std::ostringstream out;
    out << rubric_text(kind) << "\n\n";
    out << "Exploration goal: " << goal << "\n";
    out << "Discovery: " << hypothesis_text << "\n";
    out << "Rating:";
    return out.str();
}

std::map<std::string, std::string> resource_hashes() {
    return {
        {"proposer_header", sha256_hex(PROPOSER_HEADER)},
        {"proposer_instruction", sha256_hex(PROPOSER_INSTRUCTION)},
        {"truth", sha256_hex(TRUTH_TEMPLATE)},
        {"equivalence", sha256_hex(EQUIVALENCE_TEMPLATE)},
        {"rewrite", sha256_hex(REWRITE_TEMPLATE)},
        {"rubric_relevance", sha256_hex(RELEVANCE_RUBRIC)},
        {"rubric_novelty", sha256_hex(NOVELTY_RUBRIC)},
        {"rubric_significance", sha256_hex(SIGNIFICANCE_RUBRIC)},
        {"generic_goal", sha256_hex(GENERIC_GOAL)},
        {"version", RESOURCE_VERSION},
    };
}

} // namespace corpusdiff::prompts
