#include "corpusdiff/tokenizer.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace corpusdiff {

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(char(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

TokenBudgeter TokenBudgeter::estimator(double chars_per_token) {
    if (chars_per_token <= 0) throw std::invalid_argument("chars_per_token must be > 0");
    TokenBudgeter b;
    b.chars_per_token_ = chars_per_token;
    return b;
}

TokenBudgeter TokenBudgeter::external(std::function<int(std::string_view)> counter) {
    TokenBudgeter b;
    b.counter_ = std::move(counter);
    return b;
}

int TokenBudgeter::count(std::string_view text) const {
    if (counter_) return counter_(text);
    return static_cast<int>(std::ceil(double(text.size()) / chars_per_token_));
}

std::string TokenBudgeter::truncate(std::string_view text, int max_tokens) const {
    if (max_tokens <= 0) return std::string();
    if (count(text) <= max_tokens) return std::string(text);
    if (!counter_) {
        size_t keep = static_cast<size_t>(std::floor(double(max_tokens) * chars_per_token_));
        return std::string(text.substr(0, keep));
    }
    // External counters are monotone by contract; binary-search the cut.
    size_t lo = 0, hi = text.size();
    while (lo < hi) {
        size_t mid = (lo + hi + 1) / 2;
        if (counter_(text.substr(0, mid)) <= max_tokens) lo = mid;
        else hi = mid - 1;
    }
    return std::string(text.substr(0, lo));
}

} // namespace corpusdiff
