#include "keyclust/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "keyclust/corpus.hpp"
#include "keyclust/records.hpp"
#include "keyclust/reduce.hpp"
#include "keyclust/report.hpp"
#include "keyclust/stage_store.hpp"
#include "keyclust/weighting.hpp"

namespace keyclust {

namespace fs = std::filesystem;

namespace {

StageStore store_for(const PipelineRunConfig& config) {
    return StageStore(config.out / "stages");
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << content;
        if (!out) throw IoError("write failed for " + path.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename into " + path.string() + ": " + ec.message());
}

std::string pad4(std::size_t n) {
    std::string s = std::to_string(n);
    return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

Vocabulary load_vocabulary(const StageStore& store) {
    nlohmann::json meta;
    auto terms = store.load<VocabularyTerm>(stages::kVocabulary, &meta);
    if (!meta.contains("n_chunks")) throw SchemaMismatch("vocabulary stage lacks n_chunks");
    return vocabulary_from_records(terms, meta.at("n_chunks").get<std::size_t>());
}

WeightedPoints<double> load_points(const StageStore& store) {
    auto reduced = store.load<ReducedPoint>(stages::kReduced);
    if (reduced.empty()) throw EmptyCorpus("reduced stage is empty");
    const auto dims = reduced.front().coords.size();
    WeightedPoints<double> points;
    points.coords.resize(static_cast<Index>(reduced.size()), static_cast<Index>(dims));
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (reduced[i].coords.size() != dims) throw SchemaMismatch("reduced points differ in dimension");
        for (std::size_t j = 0; j < dims; ++j) points.coords(static_cast<Index>(i), static_cast<Index>(j)) = reduced[i].coords[j];
        points.ids.push_back(std::move(reduced[i].chunk_id));
    }
    points.weights = Vector<double>::Ones(points.coords.rows());
    return points;
}

void require_same_ids(const std::vector<Chunk>& chunks, const std::vector<std::string>& ids, std::string_view what) {
    bool same = chunks.size() == ids.size();
    for (std::size_t i = 0; same && i < ids.size(); ++i) same = chunks[i].chunk_id == ids[i];
    if (!same) throw LengthMismatch(std::string(what) + " is not aligned with the chunk stage; rerun the earlier stages");
}

/// Chunks with no tokens stay in the chunk stage but are not vectorized.
std::vector<Chunk> vectorizable(std::vector<Chunk> chunks) {
    std::erase_if(chunks, [](const Chunk& c) { return c.tokens.empty(); });
    return chunks;
}

std::vector<std::string> query_terms(const PipelineRunConfig& config, std::string_view query) {
    return normalize_query(query, TokenCleaner(config.cleaning()));
}

}  // namespace

CorpusSpec parse_corpus_spec(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
        throw InvalidConfig("corpus must be given as <path>:<label>, got '" + std::string(text) + "'");
    }
    return {fs::path(std::string(text.substr(0, colon))), std::string(text.substr(colon + 1))};
}

void PipelineRunConfig::validate() const {
    if (batch_size == 0) throw InvalidConfig("batch size must be at least 1");
    if (pca_dim < 1) throw InvalidConfig("pca dimension must be at least 1");
    if (min_df < 1) throw InvalidConfig("min-df must be at least 1");
    if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) throw InvalidConfig("max-df must be in (0, 1]");
    if (restarts < 1 || elbow_restarts < 1) throw InvalidConfig("restarts must be at least 1");
    if (k_min < 1 || k_max < k_min) throw InvalidConfig("k range must satisfy 1 <= k-min <= k-max");
    cluster.validate();
    std::set<std::string> labels;
    for (const auto& c : corpora) {
        if (!labels.insert(c.label).second) throw InvalidConfig("corpus label '" + c.label + "' given twice");
    }
}

CleaningConfig PipelineRunConfig::cleaning() const {
    CleaningConfig c = cleaning_config ? CleaningConfig::from_file(*cleaning_config) : CleaningConfig::defaults();
    if (stoplist_override) {
        const auto words = read_word_list(*stoplist_override);
        c.stoplist = std::set<std::string>(words.begin(), words.end());
    }
    return c;
}

namespace stages {
std::string model(ClusterMode mode) { return "model_" + std::string(to_string(mode)); }
std::string history(ClusterMode mode) { return "history_" + std::string(to_string(mode)); }
std::string weights(ClusterMode mode) { return "weights_" + std::string(to_string(mode)); }
}  // namespace stages

void run_ingest(const PipelineRunConfig& config, std::ostream& log) {
    if (config.corpora.empty()) throw InvalidConfig("ingest needs at least one --corpus");
    const TokenCleaner cleaner(config.cleaning());

    std::vector<Document> docs;
    auto failures = nlohmann::json::array();
    auto corpora = nlohmann::json::array();
    std::set<std::string> seen;
    for (const auto& spec : config.corpora) {
        auto loaded = load_corpus(spec.dir, spec.label);
        std::size_t kept = 0;
        for (auto& f : loaded.failures) {
            log << "skipped " << f.file.string() << ": " << f.message << '\n';
            failures.push_back({{"file", f.file.generic_string()}, {"message", f.message}});
        }
        for (auto& d : loaded.documents) {
            if (!seen.insert(d.doc_id).second) {
                log << "skipped duplicate paper_id '" << d.doc_id << "' in " << spec.label << '\n';
                failures.push_back({{"file", spec.dir.generic_string()}, {"message", "duplicate paper_id " + d.doc_id}});
                continue;
            }
            docs.push_back(std::move(d));
            ++kept;
        }
        corpora.push_back({{"label", spec.label}, {"documents", kept}});
    }
    if (docs.empty()) throw EmptyCorpus("no documents could be loaded");

    auto out = store_for(config).writer<Chunk>(stages::kChunks, {{"documents", docs.size()},
                                                                 {"batch_size", config.batch_size},
                                                                 {"corpora", corpora},
                                                                 {"failures", failures}});
    std::size_t n_batches = 0;
    for (auto batch : batches(docs, config.batch_size)) {
        std::vector<std::vector<Chunk>> chunked(batch.size());
        detail::parallel_for(static_cast<Index>(batch.size()), config.cluster.threads, [&](Index i) {
            chunked[static_cast<std::size_t>(i)] = preprocess_document(batch[static_cast<std::size_t>(i)], cleaner);
        });
        for (const auto& doc_chunks : chunked)
            for (const auto& c : doc_chunks) out.append(c);
        ++n_batches;
    }
    const auto n_chunks = out.count();
    out.commit();
    log << "ingest: " << docs.size() << " documents in " << n_batches << " batches, " << n_chunks << " chunks\n";
}

void run_vectorize(const PipelineRunConfig& config, std::ostream& log) {
    const auto store = store_for(config);
    const auto all = store.load<Chunk>(stages::kChunks);
    const auto chunks = vectorizable(all);
    if (chunks.empty()) throw EmptyCorpus("every chunk is empty after cleaning");
    const auto vocab = build_vocabulary(chunks, config.min_df, config.max_df_ratio);

    std::vector<TfIdfRecord> rows(chunks.size());
    detail::parallel_for(static_cast<Index>(chunks.size()), config.cluster.threads, [&](Index i) {
        const auto& c = chunks[static_cast<std::size_t>(i)];
        rows[static_cast<std::size_t>(i)] = to_record(c.chunk_id, tfidf_vector(c, vocab));
    });
    std::size_t empty = 0;
    for (const auto& r : rows) empty += r.indices.empty() ? 1 : 0;

    store.save(stages::kVocabulary, to_records(vocab),
               {{"n_chunks", vocab.n_chunks()}, {"min_df", config.min_df}, {"max_df_ratio", config.max_df_ratio}});
    store.save(stages::kTfIdf, rows, {{"columns", vocab.size()}});
    log << "vectorize: " << chunks.size() << " chunks (" << all.size() - chunks.size() << " empty skipped), "
        << vocab.size() << " terms, " << empty << " chunks without vocabulary terms\n";
}

void run_reduce(const PipelineRunConfig& config, std::ostream& log) {
    const auto store = store_for(config);
    const auto vocab = load_vocabulary(store);
    const auto records = store.load<TfIdfRecord>(stages::kTfIdf);
    const auto columns = static_cast<Index>(vocab.size());

    std::vector<TfIdfVector> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(from_record(r, columns));
    const TfIdfMatrix data = stack_rows(rows, columns);

    const Index cap = std::min<Index>(columns, static_cast<Index>(records.size()) - 1);
    const Index d = std::min(config.pca_dim, cap);
    if (d < 1) {
        throw DimensionTooLarge("cannot reduce " + std::to_string(records.size()) + " chunks over " +
                                std::to_string(columns) + " terms");
    }
    if (d < config.pca_dim) log << "reduce: pca dimension capped at " << d << '\n';

    const auto model = fit_pca(data, d);
    const RowMatrix<double> coords = pca_transform_rows(data, model);

    std::vector<ReducedPoint> points(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        points[i].chunk_id = records[i].chunk_id;
        const auto row = coords.row(static_cast<Index>(i));
        points[i].coords.assign(row.data(), row.data() + row.size());
    }
    store.save(stages::kPca, std::vector<PcaModel<double>>{model}, {{"dimension", d}});
    store.save(stages::kReduced, points, {{"dimension", d}});
    log << "reduce: " << records.size() << " x " << columns << " -> " << d << " dimensions"
        << (model.degenerate ? " (degenerate: no variance)" : "") << '\n';
}

void run_cluster(const PipelineRunConfig& config, std::ostream& log) {
    const auto store = store_for(config);
    const ClusterConfig& cc = config.cluster;
    const auto chunks = vectorizable(store.load<Chunk>(stages::kChunks));
    auto points = load_points(store);
    require_same_ids(chunks, points.ids, "reduced stage");

    if (cc.mode == ClusterMode::Modified) {
        if (config.query.empty()) throw InvalidConfig("modified mode needs --query");
        const auto vocab = load_vocabulary(store);
        const auto weights = assign_weights(chunks, query_terms(config, config.query), vocab);
        points.weights = Eigen::Map<const Vector<double>>(weights.data(), static_cast<Index>(weights.size()));
    }

    const auto model = fit_best(points, cc, config.restarts);

    std::vector<WeightRecord> weights;
    for (Index i = 0; i < points.size(); ++i) weights.push_back({points.ids[static_cast<std::size_t>(i)], points.weights(i)});

    ClusterConfig stored = cc;
    stored.threads = 1;
    store.save(stages::model(cc.mode), std::vector<StoredModel>{{stored, config.query, points.ids, model}});
    store.save(stages::history(cc.mode), model.history, {{"iterations", model.iterations}});
    store.save(stages::weights(cc.mode), weights);

    const std::string mode(to_string(cc.mode));
    std::ostringstream csv;
    write_iteration_csv(csv, model, points);
    write_file(config.out / ("iterations_" + mode + ".csv"), csv.str());
    for (std::size_t t = 1; t <= model.history.size(); ++t) {
        std::ostringstream svg;
        write_iteration_svg(svg, model, points, t);
        write_file(config.out / "plots" / (mode + "_iteration_" + pad4(t) + ".svg"), svg.str());
    }

    std::size_t dual = 0;
    for (const auto& a : model.assignments) dual += a.dual() ? 1 : 0;
    log << "cluster (" << mode << "): k=" << cc.k << ", " << model.iterations << " iterations, "
        << (model.converged ? "converged" : "not converged") << ", distortion " << format_number(model.distortion)
        << ", " << dual << " dual-assigned\n";
}

void run_elbow(const PipelineRunConfig& config, std::ostream& log) {
    const auto store = store_for(config);
    const auto points = load_points(store);
    ClusterConfig cc = config.cluster;
    cc.mode = ClusterMode::Standard;
    const auto curve = elbow_scan(points, cc, config.k_min, config.k_max, config.elbow_restarts);
    std::ostringstream csv;
    write_elbow_csv(csv, curve);
    write_file(config.out / "elbow.csv", csv.str());
    log << "elbow: k=" << config.k_min << ".." << config.k_max << " with " << config.elbow_restarts
        << " restarts each\n";
}

void run_report(const PipelineRunConfig& config, std::ostream& log) {
    const auto store = store_for(config);
    const auto standard = store.load<StoredModel>(stages::model(ClusterMode::Standard));
    const auto modified = store.load<StoredModel>(stages::model(ClusterMode::Modified));
    if (standard.size() != 1 || modified.size() != 1) throw SchemaMismatch("model stage must hold one model");
    const auto chunks = vectorizable(store.load<Chunk>(stages::kChunks));
    require_same_ids(chunks, standard.front().chunk_ids, "standard model");
    require_same_ids(chunks, modified.front().chunk_ids, "modified model");

    const std::string query = config.query.empty() ? modified.front().query : config.query;
    if (query.empty()) throw InvalidConfig("report needs --query");
    const auto terms = query_terms(config, query);

    const auto table = comparison_table(chunks, terms, standard.front().model, modified.front().model);
    for (const auto& w : table.warnings) log << "warning: " << w << '\n';

    std::ostringstream csv;
    write_comparison_csv(csv, table.rows);
    write_file(config.out / "comparison.csv", csv.str());

    for (const auto* stored : {&standard.front(), &modified.front()}) {
        const std::string mode(to_string(stored->config.mode));
        const auto& model = stored->model;
        std::ostringstream terms_csv;
        write_cluster_terms_csv(terms_csv, cluster_reports(model, chunks));
        write_file(config.out / ("cluster_terms_" + mode + ".csv"), terms_csv.str());

        const auto& relevant = stored == &standard.front() ? table.standard_relevant : table.modified_relevant;
        for (Index c : relevant) {
            const auto members = model.members(c);
            const auto texts = extract_cluster_text(model, c, chunks);
            std::string body;
            for (std::size_t i = 0; i < texts.size(); ++i) {
                body += "[" + chunks[static_cast<std::size_t>(members[i])].chunk_id + "]\n" + texts[i] + "\n\n";
            }
            write_file(config.out / "extracts" / (mode + "_cluster_" + std::to_string(c) + ".txt"), body);
        }
    }

    for (const auto& r : table.rows) {
        log << "report: " << r.corpus_label << ": " << r.total_paragraphs << " chunks, search " << r.search_count
            << ", standard " << r.standard_kmeans_count << ", modified " << r.modified_kmeans_count << '\n';
    }
}

void run_all(const PipelineRunConfig& config, std::ostream& log) {
    run_ingest(config, log);
    run_vectorize(config, log);
    run_reduce(config, log);
    PipelineRunConfig c = config;
    c.cluster.mode = ClusterMode::Standard;
    run_cluster(c, log);
    c.cluster.mode = ClusterMode::Modified;
    run_cluster(c, log);
    run_elbow(config, log);
    run_report(config, log);
}

}  // namespace keyclust
