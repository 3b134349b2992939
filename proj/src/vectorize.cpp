#include "keyclust/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "keyclust/errors.hpp"

namespace keyclust {

double smoothed_idf(std::size_t n_chunks, std::size_t document_frequency) {
    return std::log((1.0 + static_cast<double>(n_chunks)) / (1.0 + static_cast<double>(document_frequency))) + 1.0;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency,
                       std::size_t n_chunks)
    : terms_(std::move(terms)), df_(std::move(document_frequency)), n_chunks_(n_chunks) {
    if (terms_.size() != df_.size()) {
        throw LengthMismatch("vocabulary terms and frequencies differ in length");
    }
    idf_.reserve(terms_.size());
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i > 0 && !(terms_[i - 1] < terms_[i])) {
            throw InvalidConfig("vocabulary terms must be sorted and unique");
        }
        idf_.push_back(smoothed_idf(n_chunks_, df_[i]));
        index_.emplace(terms_[i], static_cast<Eigen::Index>(i));
    }
}

std::optional<Eigen::Index> Vocabulary::index_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(std::span<const Chunk> chunks, std::size_t min_df, double max_df_ratio) {
    if (chunks.empty()) {
        throw EmptyCorpus("cannot build a vocabulary from zero chunks");
    }
    std::map<std::string, std::size_t> df;
    for (const auto& chunk : chunks) {
        std::set<std::string_view> unique(chunk.tokens.begin(), chunk.tokens.end());
        for (auto t : unique) ++df[std::string(t)];
    }

    const double max_df = max_df_ratio * static_cast<double>(chunks.size());
    std::vector<std::string> terms;
    std::vector<std::size_t> counts;
    for (auto& [term, count] : df) {
        if (count < min_df || static_cast<double>(count) > max_df) continue;
        terms.push_back(term);
        counts.push_back(count);
    }
    return Vocabulary(std::move(terms), std::move(counts), chunks.size());
}

TfIdfVector raw_tfidf(std::span<const std::string> tokens, const Vocabulary& vocab) {
    std::map<Eigen::Index, double> tf;
    for (const auto& t : tokens) {
        if (auto idx = vocab.index_of(t)) tf[*idx] += 1.0;
    }
    TfIdfVector v(static_cast<Eigen::Index>(vocab.size()));
    v.reserve(static_cast<Eigen::Index>(tf.size()));
    for (auto [idx, count] : tf) {
        v.insertBack(idx) = count * vocab.idf(idx);
    }
    return v;
}

TfIdfVector tfidf_vector(const Chunk& chunk, const Vocabulary& vocab) {
    TfIdfVector v = raw_tfidf(chunk.tokens, vocab);
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

TfIdfMatrix stack_rows(std::span<const TfIdfVector> rows, Eigen::Index columns) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != columns) {
            throw LengthMismatch("tf-idf row " + std::to_string(r) + " has the wrong width");
        }
        for (TfIdfVector::InnerIterator it(rows[r]); it; ++it) {
            triplets.emplace_back(static_cast<Eigen::Index>(r), it.index(), it.value());
        }
    }
    TfIdfMatrix m(static_cast<Eigen::Index>(rows.size()), columns);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

}  // namespace keyclust
