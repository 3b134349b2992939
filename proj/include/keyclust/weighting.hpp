#ifndef KEYCLUST_WEIGHTING_HPP
#define KEYCLUST_WEIGHTING_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyclust/preprocess.hpp"
#include "keyclust/types.hpp"
#include "keyclust/vectorize.hpp"

namespace keyclust {

/// Weight given to chunks that do not mention the query.
inline constexpr double kUnrelatedWeight = 0.01;

/// Reduced coordinates (one row per chunk) with a relevance weight per row.
template <typename Scalar>
struct WeightedPoints {
    std::vector<std::string> ids;
    RowMatrix<Scalar> coords;
    Vector<Scalar> weights;

    Index size() const { return coords.rows(); }
    Index dimension() const { return coords.cols(); }

    static WeightedPoints uniform(RowMatrix<Scalar> coords, std::vector<std::string> ids = {}) {
        WeightedPoints p;
        if (ids.empty()) {
            ids.reserve(static_cast<std::size_t>(coords.rows()));
            for (Index i = 0; i < coords.rows(); ++i) ids.push_back(std::to_string(i));
        }
        p.ids = std::move(ids);
        p.weights = Vector<Scalar>::Ones(coords.rows());
        p.coords = std::move(coords);
        return p;
    }
};

/// Normalizes a free-text query with the token cleaner, e.g. "Vaccines!" ->
/// {"vaccines"}. Throws QueryNotInVocabulary when nothing survives cleaning.
std::vector<std::string> normalize_query(std::string_view query, const TokenCleaner& cleaner);

/**
 * Per-chunk query significance: for each query word, raw count in the chunk
 * times its smoothed idf; the chunk score is the maximum over query words.
 * Words missing from the vocabulary (pruned by document frequency) take their
 * idf from a direct count over `chunks`.
 */
std::vector<double> query_scores(std::span<const Chunk> chunks, std::span<const std::string> query_terms,
                                 const Vocabulary& vocab);

/**
 * Maps query scores onto weights: chunks with score s > 0 get
 * floor + (1 - floor) * s / s_max, every other chunk gets `floor`.
 * Throws QueryNotInVocabulary when no chunk contains any query word.
 */
std::vector<double> assign_weights(std::span<const Chunk> chunks, std::span<const std::string> query_terms,
                                   const Vocabulary& vocab, double floor = kUnrelatedWeight);

std::vector<double> assign_weights(std::span<const Chunk> chunks, std::string_view query_term,
                                   const Vocabulary& vocab, double floor = kUnrelatedWeight);

}  // namespace keyclust

#endif  // KEYCLUST_WEIGHTING_HPP
