#include "keyclust/records.hpp"

namespace keyclust {

namespace {

nlohmann::json rows_to_json(const RowMatrix<double>& m) {
    auto out = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

RowMatrix<double> rows_from_json(const nlohmann::json& j, Index cols_if_empty = 0) {
    const auto rows = static_cast<Index>(j.size());
    const Index cols = rows > 0 ? static_cast<Index>(j.at(0).size()) : cols_if_empty;
    RowMatrix<double> m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<Index>(row.size()) != cols) throw SchemaMismatch("ragged matrix in stage record");
        for (Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

nlohmann::json vector_to_json(const Vector<double>& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Vector<double> vector_from_json(const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector<double>>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace

void to_json(nlohmann::json& j, const Chunk& c) {
    j = {{"chunk_id", c.chunk_id}, {"doc_id", c.doc_id},           {"corpus_label", c.corpus_label},
         {"raw_text", c.raw_text}, {"sentence_count", c.sentence_count}, {"tokens", c.tokens}};
}

void from_json(const nlohmann::json& j, Chunk& c) {
    j.at("chunk_id").get_to(c.chunk_id);
    j.at("doc_id").get_to(c.doc_id);
    j.at("corpus_label").get_to(c.corpus_label);
    j.at("raw_text").get_to(c.raw_text);
    j.at("sentence_count").get_to(c.sentence_count);
    j.at("tokens").get_to(c.tokens);
}

void to_json(nlohmann::json& j, const VocabularyTerm& t) {
    j = {{"term", t.term}, {"index", t.index}, {"df", t.document_frequency}};
}

void from_json(const nlohmann::json& j, VocabularyTerm& t) {
    j.at("term").get_to(t.term);
    j.at("index").get_to(t.index);
    j.at("df").get_to(t.document_frequency);
}

void to_json(nlohmann::json& j, const TfIdfRecord& r) {
    j = {{"chunk_id", r.chunk_id}, {"indices", r.indices}, {"values", r.values}};
}

void from_json(const nlohmann::json& j, TfIdfRecord& r) {
    j.at("chunk_id").get_to(r.chunk_id);
    j.at("indices").get_to(r.indices);
    j.at("values").get_to(r.values);
    if (r.indices.size() != r.values.size()) throw SchemaMismatch("tfidf record with mismatched arrays");
}

void to_json(nlohmann::json& j, const ReducedPoint& p) {
    j = {{"chunk_id", p.chunk_id}, {"coords", p.coords}};
}

void from_json(const nlohmann::json& j, ReducedPoint& p) {
    j.at("chunk_id").get_to(p.chunk_id);
    j.at("coords").get_to(p.coords);
}

void to_json(nlohmann::json& j, const WeightRecord& w) {
    j = {{"chunk_id", w.chunk_id}, {"weight", w.weight}};
}

void from_json(const nlohmann::json& j, WeightRecord& w) {
    j.at("chunk_id").get_to(w.chunk_id);
    j.at("weight").get_to(w.weight);
}

void to_json(nlohmann::json& j, const PcaModel<double>& m) {
    // Components are stored one per row (transposed) to keep each line readable.
    RowMatrix<double> comps = m.components.transpose();
    j = {{"mean", vector_to_json(m.mean)},
         {"components", rows_to_json(comps)},
         {"explained_variance", vector_to_json(m.explained_variance)},
         {"degenerate", m.degenerate}};
}

void from_json(const nlohmann::json& j, PcaModel<double>& m) {
    m.mean = vector_from_json(j.at("mean"));
    m.components = rows_from_json(j.at("components"), m.mean.size()).transpose();
    m.explained_variance = vector_from_json(j.at("explained_variance"));
    j.at("degenerate").get_to(m.degenerate);
    if (m.components.rows() != m.mean.size() || m.components.cols() != m.explained_variance.size()) {
        throw SchemaMismatch("inconsistent PCA model shapes");
    }
}

void to_json(nlohmann::json& j, const ClusterConfig& c) {
    j = {{"k", c.k},
         {"threshold", c.threshold},
         {"damping", c.damping_weight},
         {"epsilon", c.epsilon},
         {"max_iter", c.max_iter},
         {"mode", to_string(c.mode)},
         {"seeding", to_string(c.seeding)},
         {"seed", c.seed},
         {"raw_denominator", c.raw_denominator}};
}

void from_json(const nlohmann::json& j, ClusterConfig& c) {
    j.at("k").get_to(c.k);
    j.at("threshold").get_to(c.threshold);
    j.at("damping").get_to(c.damping_weight);
    j.at("epsilon").get_to(c.epsilon);
    j.at("max_iter").get_to(c.max_iter);
    c.mode = parse_cluster_mode(j.at("mode").get<std::string>());
    c.seeding = parse_seeding(j.at("seeding").get<std::string>());
    j.at("seed").get_to(c.seed);
    j.at("raw_denominator").get_to(c.raw_denominator);
}

void to_json(nlohmann::json& j, const IterationSnapshot<double>& s) {
    j = {{"centroids", rows_to_json(s.centroids)},
         {"movement", s.movement},
         {"primary", s.primary},
         {"secondary", s.secondary},
         {"dual_points", s.dual_points},
         {"reseeded", s.reseeded}};
}

void from_json(const nlohmann::json& j, IterationSnapshot<double>& s) {
    s.centroids = rows_from_json(j.at("centroids"));
    j.at("movement").get_to(s.movement);
    j.at("primary").get_to(s.primary);
    j.at("secondary").get_to(s.secondary);
    j.at("dual_points").get_to(s.dual_points);
    j.at("reseeded").get_to(s.reseeded);
}

void to_json(nlohmann::json& j, const StoredModel& m) {
    auto assignments = nlohmann::json::array();
    for (std::size_t i = 0; i < m.model.assignments.size(); ++i) {
        const auto& a = m.model.assignments[i];
        assignments.push_back({{"chunk_id", i < m.chunk_ids.size() ? m.chunk_ids[i] : std::to_string(i)},
                               {"primary", a.primary},
                               {"secondary", a.secondary ? nlohmann::json(*a.secondary) : nlohmann::json(nullptr)},
                               {"d_primary", a.d_primary},
                               {"d_secondary", a.d_secondary}});
    }
    j = {{"config", m.config},
         {"query", m.query},
         {"centroids", rows_to_json(m.model.centroids)},
         {"iterations", m.model.iterations},
         {"converged", m.model.converged},
         {"distortion", m.model.distortion},
         {"assignments", std::move(assignments)}};
}

void from_json(const nlohmann::json& j, StoredModel& m) {
    j.at("config").get_to(m.config);
    j.at("query").get_to(m.query);
    m.model.centroids = rows_from_json(j.at("centroids"));
    j.at("iterations").get_to(m.model.iterations);
    j.at("converged").get_to(m.model.converged);
    j.at("distortion").get_to(m.model.distortion);
    m.chunk_ids.clear();
    m.model.assignments.clear();
    for (const auto& a : j.at("assignments")) {
        Assignment<double> out;
        m.chunk_ids.push_back(a.at("chunk_id").get<std::string>());
        a.at("primary").get_to(out.primary);
        if (!a.at("secondary").is_null()) out.secondary = a.at("secondary").get<Index>();
        a.at("d_primary").get_to(out.d_primary);
        a.at("d_secondary").get_to(out.d_secondary);
        m.model.assignments.push_back(out);
    }
}

std::vector<VocabularyTerm> to_records(const Vocabulary& vocab) {
    std::vector<VocabularyTerm> out;
    out.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        out.push_back({vocab.terms()[i], static_cast<Index>(i), vocab.document_frequencies()[i]});
    }
    return out;
}

Vocabulary vocabulary_from_records(const std::vector<VocabularyTerm>& terms, std::size_t n_chunks) {
    std::vector<std::string> words;
    std::vector<std::size_t> df;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].index != static_cast<Index>(i)) throw SchemaMismatch("vocabulary indices are not dense");
        words.push_back(terms[i].term);
        df.push_back(terms[i].document_frequency);
    }
    return Vocabulary(std::move(words), std::move(df), n_chunks);
}

TfIdfRecord to_record(const std::string& chunk_id, const TfIdfVector& v) {
    TfIdfRecord r;
    r.chunk_id = chunk_id;
    for (TfIdfVector::InnerIterator it(v); it; ++it) {
        r.indices.push_back(it.index());
        r.values.push_back(it.value());
    }
    return r;
}

TfIdfVector from_record(const TfIdfRecord& r, Index columns) {
    TfIdfVector v(columns);
    v.reserve(static_cast<Index>(r.indices.size()));
    for (std::size_t i = 0; i < r.indices.size(); ++i) {
        if (r.indices[i] < 0 || r.indices[i] >= columns || (i > 0 && r.indices[i] <= r.indices[i - 1])) {
            throw SchemaMismatch("tfidf record '" + r.chunk_id + "' has invalid indices");
        }
        v.insertBack(r.indices[i]) = r.values[i];
    }
    return v;
}

}  // namespace keyclust
