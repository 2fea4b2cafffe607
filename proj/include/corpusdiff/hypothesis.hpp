#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace corpusdiff {

enum class Direction { AOverB, BOverA };

enum class HypothesisSource { Proposed, Rewritten, Provided };

/// A natural-language truth predicate over a single text sample.
struct Hypothesis {
    std::string text;
    Direction direction = Direction::AOverB;
    HypothesisSource source = HypothesisSource::Proposed;
    std::string origin_prompt_id;  // empty when not prompt-derived
    std::string pre_rewrite_text;  // set iff source == Rewritten

    bool operator==(const Hypothesis&) const = default;
};

/// A hypothesis that survived validation. v/p are the human-judged estimates
/// and are either both present or both absent.
struct Discovery {
    Hypothesis hypothesis;
    double v_prime = 0.0;
    double p_prime = 1.0;
    std::optional<double> v;
    std::optional<double> p;
    int n_a = 0;
    int n_b = 0;
};

inline const char* to_string(Direction d) {
    return d == Direction::AOverB ? "A-over-B" : "B-over-A";
}

inline Direction direction_from_string(const std::string& s) {
    if (s == "A-over-B") return Direction::AOverB;
    if (s == "B-over-A") return Direction::BOverA;
    throw std::invalid_argument("unknown direction: " + s);
}

inline const char* to_string(HypothesisSource s) {
    switch (s) {
        case HypothesisSource::Proposed: return "proposed";
        case HypothesisSource::Rewritten: return "rewritten";
        default: return "provided";
    }
}

inline HypothesisSource source_from_string(const std::string& s) {
    if (s == "proposed") return HypothesisSource::Proposed;
    if (s == "rewritten") return HypothesisSource::Rewritten;
    if (s == "provided") return HypothesisSource::Provided;
    throw std::invalid_argument("unknown source: " + s);
}

inline nlohmann::ordered_json hypothesis_to_json(const Hypothesis& h) {
    nlohmann::ordered_json j;
    j["text"] = h.text;
    j["direction"] = to_string(h.direction);
    j["source"] = to_string(h.source);
    if (!h.origin_prompt_id.empty()) j["origin_prompt_id"] = h.origin_prompt_id;
    if (!h.pre_rewrite_text.empty()) j["pre_rewrite_text"] = h.pre_rewrite_text;
    return j;
}

inline Hypothesis hypothesis_from_json(const nlohmann::json& j) {
    Hypothesis h;
    h.text = j.at("text").get<std::string>();
    h.direction = direction_from_string(j.at("direction").get<std::string>());
    h.source = source_from_string(j.at("source").get<std::string>());
    h.origin_prompt_id = j.value("origin_prompt_id", std::string());
    h.pre_rewrite_text = j.value("pre_rewrite_text", std::string());
    return h;
}

inline nlohmann::ordered_json discovery_to_json(const Discovery& d) {
    nlohmann::ordered_json j;
    j["hypothesis"] = hypothesis_to_json(d.hypothesis);
    j["v_prime"] = d.v_prime;
    j["p_prime"] = d.p_prime;
    if (d.v && d.p) {
        j["v"] = *d.v;
        j["p"] = *d.p;
    }
    j["n_a"] = d.n_a;
    j["n_b"] = d.n_b;
    return j;
}

inline Discovery discovery_from_json(const nlohmann::json& j) {
    Discovery d;
    d.hypothesis = hypothesis_from_json(j.at("hypothesis"));
    d.v_prime = j.at("v_prime").get<double>();
    d.p_prime = j.at("p_prime").get<double>();
    if (j.contains("v") && j.contains("p")) {
        d.v = j["v"].get<double>();
        d.p = j["p"].get<double>();
    }
    d.n_a = j.at("n_a").get<int>();
    d.n_b = j.at("n_b").get<int>();
    return d;
}

} // namespace corpusdiff
