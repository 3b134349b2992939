#ifndef KEYCLUST_TESTS_FIXTURE_HPP
#define KEYCLUST_TESTS_FIXTURE_HPP

// In-memory run of the library pipeline over a document set.

#include <algorithm>
#include <string>
#include <vector>

#include "keyclust/cluster.hpp"
#include "keyclust/preprocess.hpp"
#include "keyclust/reduce.hpp"
#include "keyclust/vectorize.hpp"
#include "keyclust/weighting.hpp"

namespace fixture {

struct Fitted {
    std::vector<keyclust::Chunk> chunks;
    keyclust::WeightedPoints<double> points;
    keyclust::ClusterModel<double> standard;
    keyclust::ClusterModel<double> modified;
};

inline std::vector<keyclust::Chunk> chunk_documents(const std::vector<keyclust::Document>& docs) {
    const keyclust::TokenCleaner cleaner(keyclust::CleaningConfig::defaults());
    std::vector<keyclust::Chunk> chunks;
    for (const auto& d : docs) {
        for (auto& c : keyclust::preprocess_document(d, cleaner)) {
            if (!c.tokens.empty()) chunks.push_back(std::move(c));
        }
    }
    return chunks;
}

inline keyclust::RowMatrix<double> reduce_chunks(const std::vector<keyclust::Chunk>& chunks, keyclust::Index dim) {
    const auto vocab = keyclust::build_vocabulary(chunks);
    std::vector<keyclust::TfIdfVector> rows;
    for (const auto& c : chunks) rows.push_back(keyclust::tfidf_vector(c, vocab));
    const auto matrix = keyclust::stack_rows(rows, static_cast<keyclust::Index>(vocab.size()));
    dim = std::min<keyclust::Index>({dim, static_cast<keyclust::Index>(vocab.size()),
                                     static_cast<keyclust::Index>(chunks.size()) - 1});
    const auto pca = keyclust::fit_pca(matrix, dim);
    return keyclust::pca_transform_rows(matrix, pca);
}

inline Fitted fit(const std::vector<keyclust::Document>& docs, const std::string& query, keyclust::Index k,
                  std::uint64_t seed, int restarts, keyclust::Index dim = 50,
                  keyclust::Seeding seeding = keyclust::Seeding::RandomDistinct) {
    Fitted f;
    f.chunks = chunk_documents(docs);
    std::vector<std::string> ids;
    for (const auto& c : f.chunks) ids.push_back(c.chunk_id);
    f.points = keyclust::WeightedPoints<double>::uniform(reduce_chunks(f.chunks, dim), ids);

    keyclust::ClusterConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    cfg.seeding = seeding;
    cfg.mode = keyclust::ClusterMode::Standard;
    f.standard = keyclust::fit_best(f.points, cfg, restarts);

    const auto vocab = keyclust::build_vocabulary(f.chunks);
    const auto w = keyclust::assign_weights(f.chunks, query, vocab);
    keyclust::WeightedPoints<double> weighted = f.points;
    weighted.weights = Eigen::Map<const keyclust::Vector<double>>(w.data(), static_cast<keyclust::Index>(w.size()));
    cfg.mode = keyclust::ClusterMode::Modified;
    f.modified = keyclust::fit_best(weighted, cfg, restarts);
    return f;
}

}  // namespace fixture

#endif  // KEYCLUST_TESTS_FIXTURE_HPP
