#include "corpusdiff/proposer.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "corpusdiff/errors.hpp"
#include "corpusdiff/prompts.hpp"
#include "corpusdiff/util.hpp"

namespace corpusdiff {

namespace {

using WordCounts = std::unordered_map<std::string, int>;

WordCounts count_words(const std::string& text) {
    WordCounts c;
    for (auto& w : word_tokens(text)) ++c[w];
    return c;
}

// Word-count difference (side A minus side B) maintained incrementally.
struct BalanceState {
    WordCounts diff;

    bool pair_fits(const WordCounts& wa, const WordCounts& wb, double bound) const {
        auto check = [&](const std::string& w) {
            int d = 0;
            if (auto it = diff.find(w); it != diff.end()) d = it->second;
            if (auto it = wa.find(w); it != wa.end()) d += it->second;
            if (auto it = wb.find(w); it != wb.end()) d -= it->second;
            return double(std::abs(d)) <= bound;
        };
        // Only words the pair touches can change; everything else already fit.
        for (const auto& [w, n] : wa)
            if (!check(w)) return false;
        for (const auto& [w, n] : wb)
            if (wa.find(w) == wa.end() && !check(w)) return false;
        return true;
    }

    void add_pair(const WordCounts& wa, const WordCounts& wb) {
        for (const auto& [w, n] : wa) diff[w] += n;
        for (const auto& [w, n] : wb) diff[w] -= n;
    }
};

struct TruncatedPool {
    std::vector<TextSample> samples; // truncated texts, seeded order
    std::vector<WordCounts> counts;
};

TruncatedPool prepare_pool(const std::vector<TextSample>& pool, const TokenBudgeter& budgeter,
                           int max_sample_tokens, std::mt19937_64& rng) {
    TruncatedPool out;
    out.samples = pool;
    deterministic_shuffle(out.samples, rng);
    for (auto& s : out.samples) {
        s.text = budgeter.truncate(s.text, max_sample_tokens);
    }
    out.counts.reserve(out.samples.size());
    for (const auto& s : out.samples) out.counts.push_back(count_words(s.text));
    return out;
}

} // namespace

PromptBundle build_prompt(const Problem& problem, const std::vector<TextSample>& pool_a,
                          const std::vector<TextSample>& pool_b,
                          const TokenBudgeter& budgeter, uint64_t seed, bool include_goal,
                          const PromptLimits& limits) {
    if (pool_a.empty() || pool_b.empty()) throw Error("build_prompt: empty sample pool");

    const std::string goal =
        include_goal ? problem.goal : prompts::generic_goal_sentence();

    for (int target = limits.target_samples_per_side; target >= 1; --target) {
        std::mt19937_64 rng(seed);
        TruncatedPool ta = prepare_pool(pool_a, budgeter, limits.max_sample_tokens, rng);
        TruncatedPool tb = prepare_pool(pool_b, budgeter, limits.max_sample_tokens, rng);

        const double bound = limits.balance_factor * double(target);
        BalanceState balance;
        std::vector<TextSample> chosen_a, chosen_b;
        std::vector<bool> used_b(tb.samples.size(), false);

        for (size_t ia = 0; ia < ta.samples.size() && int(chosen_a.size()) < target; ++ia) {
            for (size_t ib = 0; ib < tb.samples.size(); ++ib) {
                if (used_b[ib]) continue;
                if (!balance.pair_fits(ta.counts[ia], tb.counts[ib], bound)) continue;
                balance.add_pair(ta.counts[ia], tb.counts[ib]);
                chosen_a.push_back(ta.samples[ia]);
                chosen_b.push_back(tb.samples[ib]);
                used_b[ib] = true;
                break;
            }
        }
        if (chosen_a.empty()) break; // no admissible pair at any S

        PromptBundle bundle;
        bundle.prompt_text = prompts::render_proposer(goal, chosen_a, chosen_b,
                                                      problem.example_hypotheses);
        bundle.token_count = budgeter.count(bundle.prompt_text);
        if (bundle.token_count > limits.max_prompt_tokens) continue;
        bundle.samples_a = std::move(chosen_a);
        bundle.samples_b = std::move(chosen_b);
        bundle.target_samples = target;
        bundle.id = sha256_hex(bundle.prompt_text).substr(0, 16);
        return bundle;
    }
    throw Error("sample too large for budget");
}

std::vector<std::string> parse_hypothesis_list(const std::string& completion) {
    std::vector<std::string> out;
    std::istringstream ss(completion);
    std::string line;
    while (std::getline(ss, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        std::string item;
        if (t[0] == '-' || t[0] == '*') {
            item = trim(t.substr(1));
        } else if (std::isdigit(static_cast<unsigned char>(t[0]))) {
            size_t i = 0;
            while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
            if (i < t.size() && (t[i] == '.' || t[i] == ')')) item = trim(t.substr(i + 1));
        }
        if (!item.empty()) out.push_back(std::move(item));
    }
    return out;
}

std::vector<Hypothesis> propose(const Problem& problem, Gateway& gateway,
                                const ProposeOptions& options, PromptTrace* trace) {
    if (options.quota < 1) throw Error("propose: quota must be >= 1");

    RepresentativenessScores scores = score_representativeness(problem);
    const Percentile cycle[3] = {Percentile::Top5, Percentile::Top20, Percentile::Top100};
    std::vector<TextSample> pools_a[3], pools_b[3];
    for (int i = 0; i < 3; ++i) {
        pools_a[i] = select_percentile(scores.corpus_a, problem.corpus_a.exploration, cycle[i]);
        pools_b[i] = select_percentile(scores.corpus_b, problem.corpus_b.exploration, cycle[i]);
    }

    TokenBudgeter budgeter = TokenBudgeter::estimator();
    std::vector<Hypothesis> result;
    std::unordered_set<std::string> seen;
    int no_new_streak = 0;

    for (int attempt = 0; attempt < options.max_prompts; ++attempt) {
        int slot = attempt % 3;
        PromptBundle bundle =
            build_prompt(problem, pools_a[slot], pools_b[slot], budgeter,
                         options.seed + uint64_t(attempt), options.include_goal, options.limits);
        bundle.percentile = cycle[slot];
        if (trace) trace->bundles.push_back(bundle);

        CompletionRequest req;
        req.prompt = bundle.prompt_text;
        req.max_output_tokens = options.max_output_tokens;
        req.temperature = options.temperature;
        std::string completion = gateway.complete(req);

        int new_count = 0;
        for (auto& text : parse_hypothesis_list(completion)) {
            if (!seen.insert(text).second) continue;
            Hypothesis h;
            h.text = std::move(text);
            h.origin_prompt_id = bundle.id;
            result.push_back(std::move(h));
            ++new_count;
            if (int(result.size()) >= options.quota) return result;
        }
        no_new_streak = new_count == 0 ? no_new_streak + 1 : 0;
        // Give every percentile a chance before concluding the well is dry.
        if (no_new_streak >= options.stagnation_limit && attempt + 1 >= 3) break;
    }
    if (result.empty()) throw Error("proposer exhausted");
    return result;
}

namespace {

const std::set<std::string>& comparative_lexicon() {
    static const std::set<std::string> lex = {
        "better", "best", "worse", "worst", "bigger", "biggest", "smaller", "smallest",
        "larger", "largest", "longer", "longest", "shorter", "shortest", "higher",
        "highest", "lower", "lowest", "faster", "fastest", "slower", "slowest", "older",
        "oldest", "newer", "newest", "younger", "youngest", "earlier", "earliest",
        "later", "latest", "greater", "greatest", "stronger", "strongest", "weaker",
        "weakest", "richer", "richest", "poorer", "poorest", "happier", "happiest",
        "sadder", "saddest", "easier", "easiest", "harder", "hardest", "simpler",
        "simplest", "cheaper", "cheapest", "deeper", "deepest", "shallower",
        "shallowest", "wider", "widest", "narrower", "narrowest", "thicker", "thickest",
        "thinner", "thinnest", "heavier", "heaviest", "lighter", "lightest", "darker",
        "darkest", "brighter", "brightest", "warmer", "warmest", "cooler", "coolest",
        "colder", "coldest", "hotter", "hottest", "safer", "safest", "riskier",
        "riskiest", "cleaner", "cleanest", "dirtier", "dirtiest", "quieter", "quietest",
        "louder", "loudest", "smarter", "smartest", "kinder", "kindest", "nicer",
        "nicest", "meaner", "meanest", "closer", "closest", "farther", "farthest",
        "further", "furthest", "fresher", "freshest", "rarer", "rarest", "fairer",
        "fairest", "truer", "truest", "straighter", "straightest", "rounder",
        "roundest", "smoother", "smoothest", "rougher", "roughest", "softer", "softest",
        "firmer", "firmest", "tighter", "tightest", "looser", "loosest", "fuller",
        "fullest", "emptier", "emptiest", "busier", "busiest", "lazier", "laziest",
        "angrier", "angriest", "calmer", "calmest", "prouder", "proudest", "gentler",
        "gentlest", "braver", "bravest", "likelier", "likeliest", "friendlier",
        "friendliest", "uglier", "ugliest", "prettier", "prettiest", "fancier",
        "fanciest", "plainer", "plainest", "stricter", "strictest", "broader",
        "broadest", "denser", "densest",
    };
    return lex;
}

bool ends_with(const std::string& s, const char* suffix) {
    std::string suf(suffix);
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

} // namespace

bool detect_comparative(const std::string& hypothesis_text) {
    for (const auto& w : word_tokens(hypothesis_text)) {
        if (w == "more" || w == "less" || w == "fewer" || w == "most" || w == "least")
            return true;
        if ((ends_with(w, "er") || ends_with(w, "est")) && comparative_lexicon().count(w))
            return true;
    }
    return false;
}

std::optional<Hypothesis> rewrite_comparative(const Hypothesis& h, Gateway& gateway) {
    if (!detect_comparative(h))
        throw Error("rewrite_comparative: hypothesis has no comparative");
    std::string current = h.text;
    for (int attempt = 0; attempt < 2; ++attempt) {
        CompletionRequest req;
        req.prompt = prompts::render_rewrite(current);
        req.max_output_tokens = 128;
        req.temperature = 0.0;
        std::string raw = gateway.complete(req);
        std::string rewritten = trim(raw.substr(0, raw.find('\n')));
        if (rewritten.empty()) continue;
        current = rewritten;
        if (!detect_comparative(current)) {
            Hypothesis out = h;
            out.text = current;
            out.source = HypothesisSource::Rewritten;
            out.pre_rewrite_text = h.text;
            return out;
        }
    }
    return std::nullopt;
}

} // namespace corpusdiff
