#include <doctest.h>

#include <cmath>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/scoring.hpp"

using namespace corpusdiff;

namespace {

Problem make_problem(const std::vector<std::string>& texts_a,
                     const std::vector<std::string>& texts_b) {
    auto corpus = [](const std::string& label, const std::vector<std::string>& texts) {
        Corpus c;
        c.label = label;
        for (size_t i = 0; i < texts.size(); ++i) {
            c.samples.push_back({label + "-" + std::to_string(i + 1), texts[i]});
        }
        return c;
    };
    // Exploration-only problems: validation gets a placeholder sample.
    Problem p;
    p.goal = "compare";
    p.corpus_a.exploration = corpus("A", texts_a);
    p.corpus_a.validation = corpus("A", {"held out"});
    p.corpus_a.validation.samples[0].id = "A-held";
    p.corpus_b.exploration = corpus("B", texts_b);
    p.corpus_b.validation = corpus("B", {"held out"});
    p.corpus_b.validation.samples[0].id = "B-held";
    return p;
}

} // namespace

TEST_CASE("planted words separate the corpora") {
    Problem p = make_problem({"sports sports", "sports sports", "sports sports"},
                             {"opera opera", "opera opera", "opera opera"});
    auto scores = score_representativeness(p);
    for (const auto& sa : scores.corpus_a) {
        CHECK(sa.score > 0.0);
    }
    for (const auto& sb : scores.corpus_b) {
        CHECK(sb.score > 0.0); // B scores are discriminativeness of B
    }
}

TEST_CASE("identical corpora score zero") {
    std::vector<std::string> texts = {"same text one", "same text two", "same text three"};
    Problem p = make_problem(texts, texts);
    auto scores = score_representativeness(p);
    for (const auto& s : scores.corpus_a) CHECK(s.score == doctest::Approx(0.0).epsilon(1e-12));
    for (const auto& s : scores.corpus_b) CHECK(s.score == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("toy corpora match the exhaustive log-odds oracle") {
    // Expected values enumerated over the full vocabulary with add-one
    // smoothing, length-normalized.
    Problem p = make_problem(
        {"the game was fun fun", "the game was long", "a game about sports"},
        {"the opera was sad", "the opera was long", "an opera about love"});
    auto scores = score_representativeness(p);
    REQUIRE(scores.corpus_a.size() == 3);
    REQUIRE(scores.corpus_b.size() == 3);
    CHECK(std::fabs(scores.corpus_a[0].score - 0.67588179317096686) < 1e-9);
    CHECK(std::fabs(scores.corpus_a[1].score - 0.30575159575971744) < 1e-9);
    CHECK(std::fabs(scores.corpus_a[2].score - 0.65232518603969014) < 1e-9);
    CHECK(std::fabs(scores.corpus_b[0].score - 0.56068237994021408) < 1e-9);
    CHECK(std::fabs(scores.corpus_b[1].score - 0.38739558480022784) < 1e-9);
    CHECK(std::fabs(scores.corpus_b[2].score - 0.73396917508020032) < 1e-9);
}

TEST_CASE("parallel kernel agrees with the serial reference") {
    std::vector<std::string> texts_a, texts_b;
    for (int i = 0; i < 257; ++i) {
        texts_a.push_back("alpha beta gamma delta word" + std::to_string(i % 13));
        texts_b.push_back("omega psi chi phi word" + std::to_string(i % 7));
    }
    Problem p = make_problem(texts_a, texts_b);
    auto parallel = score_representativeness(p);
    auto serial = score_representativeness_serial(p);
    REQUIRE(parallel.corpus_a.size() == serial.corpus_a.size());
    for (size_t i = 0; i < parallel.corpus_a.size(); ++i) {
        CHECK(parallel.corpus_a[i].sample_id == serial.corpus_a[i].sample_id);
        CHECK(parallel.corpus_a[i].score == serial.corpus_a[i].score);
    }
    for (size_t i = 0; i < parallel.corpus_b.size(); ++i) {
        CHECK(parallel.corpus_b[i].score == serial.corpus_b[i].score);
    }
}

TEST_CASE("select_percentile sizes and tie-breaking") {
    Corpus corpus;
    corpus.label = "A";
    std::vector<RepresentativenessScore> scores;
    for (int i = 1; i <= 100; ++i) {
        std::string id = "A-" + std::to_string(i);
        corpus.samples.push_back({id, "text " + std::to_string(i)});
        scores.push_back({id, double(i)});
    }
    auto top5 = select_percentile(scores, corpus, Percentile::Top5);
    REQUIRE(top5.size() == 5);
    CHECK(top5[0].id == "A-100"); // highest score first
    auto top20 = select_percentile(scores, corpus, Percentile::Top20);
    CHECK(top20.size() == 20);
    auto top100 = select_percentile(scores, corpus, Percentile::Top100);
    CHECK(top100.size() == 100);

    // All-equal scores fall back to id order.
    for (auto& s : scores) s.score = 1.0;
    auto tied = select_percentile(scores, corpus, Percentile::Top5);
    REQUIRE(tied.size() == 5);
    CHECK(tied[0].id == "A-1");
    CHECK(tied[1].id == "A-10"); // lexicographic ids
}

TEST_CASE("select_percentile ceiling rule and permutation stability") {
    Corpus corpus;
    corpus.label = "A";
    std::vector<RepresentativenessScore> scores;
    for (int i = 1; i <= 40; ++i) {
        std::string id = "A-" + std::to_string(i);
        corpus.samples.push_back({id, "text"});
        scores.push_back({id, double(i % 7)});
    }
    auto picked = select_percentile(scores, corpus, Percentile::Top5);
    CHECK(picked.size() == 2); // ceil(40 * 0.05)

    auto reversed = scores;
    std::reverse(reversed.begin(), reversed.end());
    auto picked2 = select_percentile(reversed, corpus, Percentile::Top5);
    REQUIRE(picked2.size() == picked.size());
    for (size_t i = 0; i < picked.size(); ++i) CHECK(picked[i].id == picked2[i].id);
}
