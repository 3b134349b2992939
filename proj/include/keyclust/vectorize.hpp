#ifndef KEYCLUST_VECTORIZE_HPP
#define KEYCLUST_VECTORIZE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

#include "keyclust/preprocess.hpp"

namespace keyclust {

using TfIdfVector = Eigen::SparseVector<double>;
using TfIdfMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Smoothed inverse document frequency: ln((1 + n) / (1 + df)) + 1.
double smoothed_idf(std::size_t n_chunks, std::size_t document_frequency);

/// Term to column mapping with per-term chunk frequencies. Columns follow
/// sorted term order.
class Vocabulary {
public:
    Vocabulary() = default;

    /// `terms` must be sorted and unique; `document_frequency` is parallel to it.
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency, std::size_t n_chunks);

    std::size_t size() const { return terms_.size(); }
    std::size_t n_chunks() const { return n_chunks_; }

    std::optional<Eigen::Index> index_of(std::string_view term) const;
    const std::string& term(Eigen::Index index) const { return terms_[static_cast<std::size_t>(index)]; }
    std::size_t document_frequency(Eigen::Index index) const { return df_[static_cast<std::size_t>(index)]; }
    double idf(Eigen::Index index) const { return idf_[static_cast<std::size_t>(index)]; }

    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::size_t>& document_frequencies() const { return df_; }

    bool operator==(const Vocabulary& other) const {
        return terms_ == other.terms_ && df_ == other.df_ && n_chunks_ == other.n_chunks_;
    }

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> df_;
    std::vector<double> idf_;
    std::size_t n_chunks_ = 0;
    std::unordered_map<std::string, Eigen::Index> index_;
};

inline constexpr std::size_t kDefaultMinDf = 2;
inline constexpr double kDefaultMaxDfRatio = 0.95;

/**
 * Counts, for every token, the number of chunks containing it, and keeps terms
 * with `min_df <= df <= max_df_ratio * n_chunks`. Throws EmptyCorpus when
 * `chunks` is empty.
 */
Vocabulary build_vocabulary(std::span<const Chunk> chunks, std::size_t min_df = kDefaultMinDf,
                            double max_df_ratio = kDefaultMaxDfRatio);

/// Raw count times smoothed idf for every in-vocabulary token, before
/// normalization. Out-of-vocabulary tokens are ignored.
TfIdfVector raw_tfidf(std::span<const std::string> tokens, const Vocabulary& vocab);

/// L2-normalized tf-idf. A chunk with no in-vocabulary token yields an empty
/// (all-zero) vector.
TfIdfVector tfidf_vector(const Chunk& chunk, const Vocabulary& vocab);

/// Stacks vectors as rows of an n x V sparse matrix.
TfIdfMatrix stack_rows(std::span<const TfIdfVector> rows, Eigen::Index columns);

}  // namespace keyclust

#endif  // KEYCLUST_VECTORIZE_HPP
