#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace corpusdiff {

// Lowercase alphanumeric runs; everything else separates.
std::vector<std::string> word_tokens(std::string_view text);

/// Counts and truncates text against a token budget. The default estimator
/// assumes a fixed number of characters per token; an external counter can be
/// plugged in when an exact tokenizer is available. Counts are monotone in
/// string length within a mode.
class TokenBudgeter {
public:
    static TokenBudgeter estimator(double chars_per_token = 4.0);
    static TokenBudgeter external(std::function<int(std::string_view)> counter);

    int count(std::string_view text) const;

    // Longest prefix whose count fits in max_tokens.
    std::string truncate(std::string_view text, int max_tokens) const;

    bool is_estimator() const { return !counter_; }
    double chars_per_token() const { return chars_per_token_; }

private:
    TokenBudgeter() = default;
    double chars_per_token_ = 4.0;
    std::function<int(std::string_view)> counter_;
};

} // namespace corpusdiff
