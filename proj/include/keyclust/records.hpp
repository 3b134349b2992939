#ifndef KEYCLUST_RECORDS_HPP
#define KEYCLUST_RECORDS_HPP

// Stage record types and their JSON mappings.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "keyclust/cluster.hpp"
#include "keyclust/preprocess.hpp"
#include "keyclust/reduce.hpp"
#include "keyclust/stage_store.hpp"
#include "keyclust/vectorize.hpp"

namespace keyclust {

struct VocabularyTerm {
    std::string term;
    Index index = 0;
    std::size_t document_frequency = 0;

    bool operator==(const VocabularyTerm&) const = default;
};

struct TfIdfRecord {
    std::string chunk_id;
    std::vector<Index> indices;
    std::vector<double> values;

    bool operator==(const TfIdfRecord&) const = default;
};

struct ReducedPoint {
    std::string chunk_id;
    std::vector<double> coords;

    bool operator==(const ReducedPoint&) const = default;
};

struct WeightRecord {
    std::string chunk_id;
    double weight = 0;

    bool operator==(const WeightRecord&) const = default;
};

/// A fitted model without its iteration history (stored as a separate stage).
struct StoredModel {
    ClusterConfig config;
    std::string query;
    std::vector<std::string> chunk_ids;
    ClusterModel<double> model;
};

template <> struct StageRecord<Chunk> { static constexpr std::string_view name = "chunk"; };
template <> struct StageRecord<VocabularyTerm> { static constexpr std::string_view name = "vocabulary_term"; };
template <> struct StageRecord<TfIdfRecord> { static constexpr std::string_view name = "tfidf"; };
template <> struct StageRecord<PcaModel<double>> { static constexpr std::string_view name = "pca_model"; };
template <> struct StageRecord<ReducedPoint> { static constexpr std::string_view name = "reduced_point"; };
template <> struct StageRecord<WeightRecord> { static constexpr std::string_view name = "weight"; };
template <> struct StageRecord<StoredModel> { static constexpr std::string_view name = "cluster_model"; };
template <> struct StageRecord<IterationSnapshot<double>> { static constexpr std::string_view name = "iteration"; };

void to_json(nlohmann::json& j, const Chunk& c);
void from_json(const nlohmann::json& j, Chunk& c);
void to_json(nlohmann::json& j, const VocabularyTerm& t);
void from_json(const nlohmann::json& j, VocabularyTerm& t);
void to_json(nlohmann::json& j, const TfIdfRecord& r);
void from_json(const nlohmann::json& j, TfIdfRecord& r);
void to_json(nlohmann::json& j, const ReducedPoint& p);
void from_json(const nlohmann::json& j, ReducedPoint& p);
void to_json(nlohmann::json& j, const WeightRecord& w);
void from_json(const nlohmann::json& j, WeightRecord& w);
void to_json(nlohmann::json& j, const PcaModel<double>& m);
void from_json(const nlohmann::json& j, PcaModel<double>& m);
void to_json(nlohmann::json& j, const ClusterConfig& c);
void from_json(const nlohmann::json& j, ClusterConfig& c);
void to_json(nlohmann::json& j, const IterationSnapshot<double>& s);
void from_json(const nlohmann::json& j, IterationSnapshot<double>& s);
void to_json(nlohmann::json& j, const StoredModel& m);
void from_json(const nlohmann::json& j, StoredModel& m);

std::vector<VocabularyTerm> to_records(const Vocabulary& vocab);
Vocabulary vocabulary_from_records(const std::vector<VocabularyTerm>& terms, std::size_t n_chunks);

TfIdfRecord to_record(const std::string& chunk_id, const TfIdfVector& v);
TfIdfVector from_record(const TfIdfRecord& r, Index columns);

}  // namespace keyclust

#endif  // KEYCLUST_RECORDS_HPP
