#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "keyclust/weighting.hpp"

using namespace keyclust;

namespace {

std::vector<Chunk> chunks_of(const std::vector<std::vector<std::string>>& tokens) {
    std::vector<Chunk> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        Chunk c;
        c.chunk_id = "c" + std::to_string(i);
        c.tokens = tokens[i];
        out.push_back(c);
    }
    return out;
}

}  // namespace

TEST_SUITE("weighting") {

TEST_CASE("hand-built three-chunk corpus") {
    // s = tf * idf with the same idf in every chunk, so the weights are
    // 0.01 + 0.99 * tf / max_tf: 1.0, 0.505 and the floor.
    const auto chunks = chunks_of({{"vaccine", "vaccine", "dose"}, {"vaccine", "trial"}, {"trial", "dose"}});
    const auto vocab = build_vocabulary(chunks, 1, 1.0);
    const auto w = assign_weights(chunks, "vaccine", vocab);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == 1.0);
    CHECK(std::abs(w[1] - 0.505) < 1e-15);
    CHECK(w[2] == 0.01);
}

TEST_CASE("a chunk without the query gets the floor") {
    const auto chunks = chunks_of({{"vaccine"}, {"unrelated", "words"}});
    const auto vocab = build_vocabulary(chunks, 1, 1.0);
    const auto w = assign_weights(chunks, "vaccine", vocab);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == kUnrelatedWeight);
}

TEST_CASE("query missing everywhere") {
    const auto chunks = chunks_of({{"alpha"}, {"beta"}});
    const auto vocab = build_vocabulary(chunks, 1, 1.0);
    CHECK_THROWS_AS(assign_weights(chunks, "vaccine", vocab), QueryNotInVocabulary);
}

TEST_CASE("query pruned from the vocabulary still scores") {
    const auto chunks = chunks_of({{"vaccine", "dose"}, {"dose", "trial"}, {"trial", "dose"}});
    const auto vocab = build_vocabulary(chunks, 2, 1.0);
    REQUIRE_FALSE(vocab.index_of("vaccine").has_value());
    const auto w = assign_weights(chunks, "vaccine", vocab);
    CHECK(w == std::vector<double>{1.0, 0.01, 0.01});
}

TEST_CASE("multi-word queries take the best word per chunk") {
    const auto chunks = chunks_of({{"vaccine", "trial"}, {"mask", "mask", "trial"}, {"dose"}, {"vaccine", "mask"}});
    const auto vocab = build_vocabulary(chunks, 1, 1.0);
    const std::vector<std::string> terms{"vaccine", "mask"};
    const auto s = query_scores(chunks, terms, vocab);
    const double idf = smoothed_idf(4, 2);
    CHECK(s[0] == idf);
    CHECK(s[1] == 2 * idf);
    CHECK(s[2] == 0.0);
    CHECK(s[3] == idf);
    const auto w = assign_weights(chunks, terms, vocab);
    CHECK(w[1] == 1.0);
    CHECK(w[2] == 0.01);
}

TEST_CASE("range, zero avoidance and monotonicity") {
    std::mt19937_64 rng(6);
    std::vector<std::vector<std::string>> tokens(150);
    for (auto& t : tokens) {
        for (int i = 0; i < 10; ++i) t.push_back(rng() % 6 == 0 ? "vaccine" : "w" + std::to_string(rng() % 40));
    }
    const auto chunks = chunks_of(tokens);
    const auto vocab = build_vocabulary(chunks, 2, 0.95);
    const auto w = assign_weights(chunks, "vaccine", vocab);
    CHECK(std::find(w.begin(), w.end(), 1.0) != w.end());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto count = std::count(tokens[i].begin(), tokens[i].end(), "vaccine");
        CHECK(w[i] >= 0.01);
        CHECK(w[i] <= 1.0);
        CHECK((w[i] == 0.01) == (count == 0));
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (std::count(tokens[j].begin(), tokens[j].end(), "vaccine") > count) CHECK(w[j] >= w[i]);
        }
    }
}

TEST_CASE("normalize_query") {
    const TokenCleaner cleaner(CleaningConfig::defaults());
    CHECK(normalize_query("Vaccines!", cleaner) == std::vector<std::string>{"vaccines"});
    CHECK(normalize_query("the Vaccine vaccine trial", cleaner) == std::vector<std::string>{"vaccine", "trial"});
    CHECK_THROWS_AS(normalize_query("the of 2020", cleaner), QueryNotInVocabulary);
}

TEST_CASE("uniform points") {
    RowMatrix<double> coords(3, 2);
    coords << 1, 2, 3, 4, 5, 6;
    const auto p = WeightedPoints<double>::uniform(coords);
    CHECK(p.size() == 3);
    CHECK(p.dimension() == 2);
    CHECK(p.weights == Vector<double>::Ones(3));
    CHECK(p.ids == std::vector<std::string>{"0", "1", "2"});
}

}  // TEST_SUITE
