#ifndef KEYCLUST_TESTS_SYNTHETIC_HPP
#define KEYCLUST_TESTS_SYNTHETIC_HPP

// Deterministic synthetic corpora built from made-up topic vocabularies.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "keyclust/corpus.hpp"
#include "keyclust/types.hpp"

namespace synth {

inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// A pronounceable non-word, distinct for every (group, index) with group < 64.
inline std::string pseudo_word(std::size_t group, std::size_t index) {
    static const std::string consonants = "bdfgklmnprstvz";
    static const std::string vowels = "aeiou";
    auto syllable = [&](std::size_t s) {
        s %= consonants.size() * vowels.size();
        return std::string{consonants[s / vowels.size()], vowels[s % vowels.size()]};
    };
    return syllable(group + 3) + syllable(index % 70) + syllable(index / 70 + 2 * group + 5) + "x";
}

struct Topic {
    std::vector<std::string> words;
    std::vector<double> cumulative;  // Zipf-like weights over words

    Topic(std::size_t group, std::size_t size) {
        double total = 0;
        for (std::size_t j = 0; j < size; ++j) {
            words.push_back(pseudo_word(group, j));
            total += 1.0 / static_cast<double>(j + 1);
            cumulative.push_back(total);
        }
        for (auto& c : cumulative) c /= total;
    }

    const std::string& draw(std::mt19937_64& rng) const {
        const double u = unit(rng);
        std::size_t j = 0;
        while (j + 1 < cumulative.size() && cumulative[j] < u) ++j;
        return words[j];
    }
};

inline const std::vector<std::string>& fillers() {
    static const std::vector<std::string> f = {"the", "of", "and", "in", "was", "with", "for", "these", "an", "its"};
    return f;
}

/// One sentence: `topic_words` draws from `topic`, `general_words` uniform
/// draws from `general`, stop words in between, capitalised, ending in a period.
inline std::string sentence(std::mt19937_64& rng, const Topic& topic, const Topic& general,
                            std::size_t topic_words, std::size_t general_words,
                            const std::vector<std::string>& forced = {}) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < topic_words; ++i) words.push_back(topic.draw(rng));
    for (std::size_t i = 0; i < general_words; ++i) words.push_back(general.words[rng() % general.words.size()]);
    for (const auto& w : forced) words.insert(words.begin() + 1 + static_cast<long>(rng() % words.size()), w);
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) {
            out += ' ';
            if (rng() % 3 == 0) out += fillers()[rng() % fillers().size()] + ' ';
        }
        out += words[i];
    }
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out + '.';
}

/// Planted corpus: one document (= one chunk of 3 sentences) per entry.
struct PlantedCorpus {
    std::vector<keyclust::Document> documents;
    std::size_t relevant = 0;  // documents containing the query word
};

/**
 * `background_topics` topics with `per_topic` chunks each, plus a query topic
 * with `pure` chunks mentioning `query` and `dual` chunks that mix
 * `dual_query_sentences` query-topic sentences (each mentioning `query` once)
 * with background sentences, spread evenly over the background topics.
 */
inline PlantedCorpus planted_corpus(std::uint64_t seed, std::size_t background_topics, std::size_t per_topic,
                                    std::size_t pure, std::size_t dual, const std::string& query = "vaccine",
                                    std::size_t dual_query_sentences = 2) {
    std::mt19937_64 rng(seed);
    std::vector<Topic> topics;
    for (std::size_t t = 0; t <= background_topics; ++t) topics.emplace_back(t, 60);
    const Topic general(40, 150);
    const Topic& query_topic = topics.back();

    PlantedCorpus out;
    auto add = [&](std::string body, const std::string& label) {
        keyclust::Document d;
        d.doc_id = "p" + std::to_string(out.documents.size() + 1000);
        d.title = d.doc_id;
        d.body = std::move(body);
        d.corpus_label = label;
        out.documents.push_back(std::move(d));
    };
    for (std::size_t t = 0; t < background_topics; ++t) {
        for (std::size_t i = 0; i < per_topic; ++i) {
            std::string body;
            for (int s = 0; s < 3; ++s) body += (s ? " " : "") + sentence(rng, topics[t], general, 6, 3);
            add(body, "synthetic");
        }
    }
    for (std::size_t i = 0; i < pure; ++i) {
        std::string body;
        for (int s = 0; s < 3; ++s) {
            std::vector<std::string> forced(rng() % 2 + (s == 0 ? 1 : 0), query);
            body += (s ? " " : "") + sentence(rng, query_topic, general, 6, 3, forced);
        }
        add(body, "synthetic");
        ++out.relevant;
    }
    for (std::size_t i = 0; i < dual; ++i) {
        const Topic& other = topics[i % background_topics];
        std::string body = sentence(rng, query_topic, general, 6, 3, {query});
        for (std::size_t s = 1; s < dual_query_sentences; ++s) body += " " + sentence(rng, query_topic, general, 6, 3, {query});
        for (std::size_t s = dual_query_sentences; s < 3; ++s) body += " " + sentence(rng, other, general, 6, 3);
        add(body, "synthetic");
        ++out.relevant;
    }
    return out;
}

/**
 * Writes `articles` JSON article files spread over `corpora` directories
 * under `root`, each article `sentences` sentences long in paragraphs of five.
 * Articles lean on one of six topics (the last one mentions `query`) and
 * borrow a fifth of their sentences from another topic. Returns the corpus
 * directories.
 */
inline std::vector<std::filesystem::path> write_articles(const std::filesystem::path& root, std::uint64_t seed,
                                                         std::size_t articles, std::size_t sentences,
                                                         std::size_t corpora, const std::string& query = "vaccine") {
    std::mt19937_64 rng(seed);
    std::vector<Topic> topics;
    for (std::size_t t = 0; t < 6; ++t) topics.emplace_back(t, 80);
    const Topic general(40, 200);

    std::vector<std::filesystem::path> dirs;
    for (std::size_t c = 0; c < corpora; ++c) {
        dirs.push_back(root / ("corpus" + std::to_string(c)));
        std::filesystem::create_directories(dirs.back());
    }
    for (std::size_t a = 0; a < articles; ++a) {
        const std::size_t main = a % topics.size();
        nlohmann::json paragraphs = nlohmann::json::array();
        std::string paragraph;
        for (std::size_t s = 0; s < sentences; ++s) {
            const std::size_t t = rng() % 5 == 0 ? rng() % topics.size() : main;
            std::vector<std::string> forced;
            if (t == topics.size() - 1 && rng() % 2 == 0) forced.push_back(query);
            if (rng() % 10 == 0) forced.push_back("[" + std::to_string(rng() % 40 + 1) + "]");
            if (rng() % 12 == 0) forced.push_back(std::to_string(rng() % 1000));
            paragraph += (paragraph.empty() ? "" : " ") + sentence(rng, topics[t], general, 7, 3, forced);
            if (s % 5 == 4 || s + 1 == sentences) {
                paragraphs.push_back(paragraph);
                paragraph.clear();
            }
        }
        const std::string id = "art" + std::to_string(10000 + a);
        nlohmann::json doc = {{"paper_id", id}, {"title", "Synthetic article " + std::to_string(a)},
                              {"body_text", paragraphs}};
        std::ofstream(dirs[a % corpora] / (id + ".json")) << doc.dump();
    }
    return dirs;
}

}  // namespace synth

#endif  // KEYCLUST_TESTS_SYNTHETIC_HPP
