#include "keyclust/weighting.hpp"

#include <algorithm>
#include <set>

#include "keyclust/errors.hpp"

namespace keyclust {

std::vector<std::string> normalize_query(std::string_view query, const TokenCleaner& cleaner) {
    auto words = cleaner.clean(query);
    std::set<std::string> unique;
    std::vector<std::string> out;
    for (auto& w : words) {
        if (unique.insert(w).second) out.push_back(std::move(w));
    }
    if (out.empty()) {
        throw QueryNotInVocabulary("query '" + std::string(query) + "' has no terms left after cleaning");
    }
    return out;
}

std::vector<double> query_scores(std::span<const Chunk> chunks, std::span<const std::string> query_terms,
                                 const Vocabulary& vocab) {
    std::vector<double> idf;
    idf.reserve(query_terms.size());
    for (const auto& term : query_terms) {
        if (auto idx = vocab.index_of(term)) {
            idf.push_back(vocab.idf(*idx));
            continue;
        }
        std::size_t df = 0;
        for (const auto& c : chunks) {
            if (std::find(c.tokens.begin(), c.tokens.end(), term) != c.tokens.end()) ++df;
        }
        idf.push_back(smoothed_idf(chunks.size(), df));
    }

    std::vector<double> scores(chunks.size(), 0.0);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        for (std::size_t q = 0; q < query_terms.size(); ++q) {
            const auto tf = std::count(chunks[i].tokens.begin(), chunks[i].tokens.end(), query_terms[q]);
            scores[i] = std::max(scores[i], static_cast<double>(tf) * idf[q]);
        }
    }
    return scores;
}

std::vector<double> assign_weights(std::span<const Chunk> chunks, std::span<const std::string> query_terms,
                                   const Vocabulary& vocab, double floor) {
    const auto scores = query_scores(chunks, query_terms, vocab);
    const double best = scores.empty() ? 0.0 : *std::max_element(scores.begin(), scores.end());
    if (!(best > 0.0)) {
        std::string joined;
        for (const auto& t : query_terms) joined += (joined.empty() ? "" : " ") + t;
        throw QueryNotInVocabulary("query '" + joined + "' does not occur in any chunk");
    }
    std::vector<double> weights(scores.size(), floor);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > 0.0) weights[i] = floor + (1.0 - floor) * (scores[i] / best);
    }
    return weights;
}

std::vector<double> assign_weights(std::span<const Chunk> chunks, std::string_view query_term,
                                   const Vocabulary& vocab, double floor) {
    const std::string term(query_term);
    return assign_weights(chunks, std::span<const std::string>(&term, 1), vocab, floor);
}

}  // namespace keyclust
