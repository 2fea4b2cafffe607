#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/errors.hpp"
#include "corpusdiff/stats.hpp"
#include "corpusdiff/util.hpp"

using namespace corpusdiff;

TEST_CASE("rating aggregation follows the expansion rule") {
    using L = RatingLabel;
    std::vector<L> unanimous = {L::CertainlyYes, L::CertainlyYes, L::CertainlyYes};
    CHECK(aggregate_ratings(unanimous) == 1.0);

    // Worked example: mean of [1.0, 0.25, 0.5, 0.5].
    std::vector<L> mixed = {L::CertainlyYes, L::LikelyNo, L::Confusing};
    CHECK(aggregate_ratings(mixed) == doctest::Approx(0.5625).epsilon(1e-15));

    std::vector<L> neutral = {L::Neutral};
    CHECK(aggregate_ratings(neutral) == 0.5);

    std::vector<L> confusing = {L::Confusing};
    CHECK(aggregate_ratings(confusing) == 0.5);

    std::vector<L> none;
    CHECK_THROWS_AS(aggregate_ratings(none), Error);
}

TEST_CASE("rating aggregation is order-invariant and bounded") {
    using L = RatingLabel;
    const L all[] = {L::CertainlyYes, L::LikelyYes, L::Neutral,
                     L::LikelyNo, L::CertainlyNo, L::Confusing};
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<L> labels;
        size_t n = 1 + rng() % 5;
        for (size_t i = 0; i < n; ++i) labels.push_back(all[rng() % 6]);
        double v = aggregate_ratings(labels);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        auto shuffled = labels;
        deterministic_shuffle(shuffled, rng);
        CHECK(aggregate_ratings(shuffled) == v);
    }
}

TEST_CASE("step-up selection on the worked example") {
    // Thresholds k*fdr/m: {0.025, 0.05, 0.075, 0.1}; the largest k with
    // p(k) <= threshold(k) is 3.
    std::vector<double> p = {0.001, 0.02, 0.04, 0.2};
    auto kept = benjamini_hochberg(p, 0.1);
    REQUIRE(kept.size() == 3);
    CHECK(kept == std::vector<size_t>{0, 1, 2});
}

TEST_CASE("step-up edge cases") {
    std::vector<double> all_ones = {1.0, 1.0, 1.0};
    CHECK(benjamini_hochberg(all_ones, 0.1).empty());

    std::vector<double> single = {0.05};
    CHECK(benjamini_hochberg(single, 0.1) == std::vector<size_t>{0});

    std::vector<double> empty;
    CHECK(benjamini_hochberg(empty, 0.1).empty());

    // Kept indices refer to the input order, not the sorted order.
    std::vector<double> unsorted = {0.2, 0.001, 0.04, 0.02};
    auto kept = benjamini_hochberg(unsorted, 0.1);
    CHECK(kept == std::vector<size_t>{1, 2, 3});
}

namespace {

// Literal step-up definition over sorted prefixes, kept independent of the
// library implementation.
std::vector<size_t> bh_bruteforce(const std::vector<double>& p, double fdr) {
    std::vector<size_t> order(p.size());
    for (size_t i = 0; i < p.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return p[x] != p[y] ? p[x] < p[y] : x < y; });
    size_t best = 0;
    for (size_t k = p.size(); k >= 1; --k) {
        if (p[order[k - 1]] <= double(k) * fdr / double(p.size())) {
            best = k;
            break;
        }
    }
    std::vector<size_t> kept(order.begin(), order.begin() + best);
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace

TEST_CASE("step-up matches brute force on random small vectors") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        size_t m = 1 + rng() % 8;
        std::vector<double> p(m);
        for (auto& v : p) v = double(rng() % 1001) / 1000.0;
        double fdr = 0.01 + double(rng() % 50) / 100.0;
        CHECK(benjamini_hochberg(p, fdr) == bh_bruteforce(p, fdr));
    }
}

TEST_CASE("lowering a p-value never shrinks the kept set") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        size_t m = 2 + rng() % 7;
        std::vector<double> p(m);
        for (auto& v : p) v = double(rng() % 1001) / 1000.0;
        auto before = benjamini_hochberg(p, 0.1);
        auto perturbed = p;
        size_t pick = rng() % m;
        perturbed[pick] = perturbed[pick] * double(rng() % 1000) / 1000.0;
        auto after = benjamini_hochberg(perturbed, 0.1);
        CHECK(after.size() >= before.size());
    }
}

namespace {

Problem validity_problem() {
    auto corpus = [](const std::string& label, int n) {
        Corpus c;
        c.label = label;
        for (int i = 1; i <= n; ++i) {
            c.samples.push_back({label + std::to_string(i), "text " + std::to_string(i)});
        }
        return c;
    };
    Problem p;
    p.goal = "compare";
    p.corpus_a.exploration = corpus("ae", 3);
    p.corpus_a.validation = corpus("av", 4);
    p.corpus_b.exploration = corpus("be", 3);
    p.corpus_b.validation = corpus("bv", 4);
    return p;
}

} // namespace

TEST_CASE("validity estimation over judged validation samples") {
    Problem p = validity_problem();
    Hypothesis h;
    h.text = "anything";

    std::map<std::string, double> judged;
    for (int i = 1; i <= 4; ++i) judged["av" + std::to_string(i)] = 1.0;
    for (int i = 1; i <= 4; ++i) judged["bv" + std::to_string(i)] = 0.0;
    ValidityEstimate est = estimate_validity(h, p, judged);
    CHECK(est.v == 1.0);
    CHECK(est.p == 0.0);
    CHECK(est.n_a == 4);
    CHECK(est.n_b == 4);

    for (auto& [k, v] : judged) v = 0.75; // identical on both sides
    ValidityEstimate flat = estimate_validity(h, p, judged);
    CHECK(flat.v == 0.0);
    CHECK(flat.p == 0.5);

    std::map<std::string, double> sparse = {{"av1", 1.0}, {"bv1", 0.0}, {"bv2", 0.0}};
    CHECK_THROWS_AS(estimate_validity(h, p, sparse), Error);
}

TEST_CASE("validity equals a direct re-average of the judged map") {
    Problem p = validity_problem();
    Hypothesis h;
    h.text = "x";
    std::map<std::string, double> judged = {
        {"av1", 0.9}, {"av2", 0.3}, {"av3", 0.7}, {"bv1", 0.2}, {"bv2", 0.5}, {"bv4", 0.1}};
    ValidityEstimate est = estimate_validity(h, p, judged);
    double mean_a = (0.9 + 0.3 + 0.7) / 3.0;
    double mean_b = (0.2 + 0.5 + 0.1) / 3.0;
    CHECK(est.v == mean_a - mean_b);
    CHECK(est.n_a == 3);
    CHECK(est.n_b == 3);
}

TEST_CASE("top unigrams match the enumeration oracle") {
    auto corpus_from = [](const std::string& label, const std::vector<std::string>& texts) {
        Corpus c;
        c.label = label;
        for (size_t i = 0; i < texts.size(); ++i) {
            c.samples.push_back({label + "-" + std::to_string(i + 1), texts[i]});
        }
        return c;
    };
    Problem p;
    p.goal = "compare";
    p.corpus_a.exploration = corpus_from(
        "A", {"yo check it", "yo check this mix", "yo yo fresh beat", "spin that track"});
    p.corpus_a.validation = corpus_from("A", {"held"});
    p.corpus_b.exploration =
        corpus_from("B", {"hello there friend", "good day to you", "hello good evening",
                          "pleasant morning to you"});
    p.corpus_b.validation = corpus_from("B", {"held"});

    auto features = top_discriminative_unigrams(p, 5);
    REQUIRE(features.corpus_a.size() == 5);
    CHECK(features.corpus_a[0].word == "yo");
    CHECK(std::fabs(features.corpus_a[0].log_odds - 1.6094379124341005) < 1e-9);
    CHECK(features.corpus_a[1].word == "check");
    CHECK(std::fabs(features.corpus_a[1].log_odds - 1.09861228866811) < 1e-9);
    // Ties broken alphabetically.
    CHECK(features.corpus_a[2].word == "beat");
    CHECK(features.corpus_a[3].word == "fresh");
    CHECK(features.corpus_a[4].word == "it");

    REQUIRE(features.corpus_b.size() == 5);
    CHECK(features.corpus_b[0].word == "good");
    CHECK(features.corpus_b[1].word == "hello");
    CHECK(features.corpus_b[2].word == "to");
    CHECK(features.corpus_b[3].word == "you");
    CHECK(std::fabs(features.corpus_b[0].log_odds - 1.09861228866811) < 1e-9);
}

TEST_CASE("identical corpora rank unigrams alphabetically at zero") {
    auto corpus_from = [](const std::string& label) {
        Corpus c;
        c.label = label;
        c.samples.push_back({label + "-1", "delta alpha charlie bravo"});
        return c;
    };
    Problem p;
    p.goal = "compare";
    p.corpus_a.exploration = corpus_from("A");
    p.corpus_a.validation = corpus_from("Av");
    p.corpus_b.exploration = corpus_from("B");
    p.corpus_b.validation = corpus_from("Bv");
    auto features = top_discriminative_unigrams(p, 3);
    REQUIRE(features.corpus_a.size() == 3);
    CHECK(features.corpus_a[0].log_odds == 0.0);
    CHECK(features.corpus_a[0].word == "alpha");
    CHECK(features.corpus_a[1].word == "bravo");
    CHECK(features.corpus_a[2].word == "charlie");
}

TEST_CASE("table rows round-trip the reported precision") {
    Discovery d;
    d.hypothesis.text = "mentions lack of legroom";
    d.v = 0.16;
    d.p = 1.15e-03;
    d.v_prime = 0.38;
    d.p_prime = 1.34e-45;
    std::vector<Discovery> rows = {d};
    std::string table = render_discovery_table(rows);
    CHECK(table.find("mentions lack of legroom") != std::string::npos);
    CHECK(table.find("0.16") != std::string::npos);
    CHECK(table.find("1.15e-03") != std::string::npos);
    CHECK(table.find("0.38") != std::string::npos);
    CHECK(table.find("1.34e-45") != std::string::npos);

    // Reparsing the printed numbers reproduces the stored values.
    CHECK(std::stod("0.16") == *d.v);
    CHECK(std::stod("1.15e-03") == *d.p);
}

TEST_CASE("ratings file loading validates fields") {
    auto dir = std::filesystem::temp_directory_path() / "corpusdiff_test_stats";
    std::filesystem::create_directories(dir);
    auto path = dir / "ratings.jsonl";
    write_file(path,
               R"({"hypothesis_id": "h1", "sample_id": "s1", "rater_id": "r1", "label": "CertainlyYes"})"
               "\n"
               R"({"hypothesis_id": "h1", "sample_id": "s1", "rater_id": "r2", "label": "Confusing"})"
               "\n");
    auto ratings = load_ratings(path);
    REQUIRE(ratings.size() == 2);
    CHECK(ratings[0].label == RatingLabel::CertainlyYes);
    CHECK(ratings[1].label == RatingLabel::Confusing);

    write_file(path, R"({"hypothesis_id": "h1", "sample_id": "s1", "rater_id": "r1"})" "\n");
    CHECK_THROWS_WITH_AS(load_ratings(path), doctest::Contains("label"), ManifestError);

    write_file(path, R"({"hypothesis_id": "h1", "sample_id": "s1", "rater_id": "r1", "label": "Dunno"})" "\n");
    CHECK_THROWS_AS(load_ratings(path), ManifestError);
}
