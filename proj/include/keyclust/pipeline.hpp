#ifndef KEYCLUST_PIPELINE_HPP
#define KEYCLUST_PIPELINE_HPP

// Persisted pipeline stages behind the command-line tool.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "keyclust/cluster.hpp"
#include "keyclust/preprocess.hpp"
#include "keyclust/vectorize.hpp"

namespace keyclust {

struct CorpusSpec {
    std::filesystem::path dir;
    std::string label;
};

/// Parses "<path>:<label>", splitting at the last colon. Throws InvalidConfig.
CorpusSpec parse_corpus_spec(std::string_view text);

struct PipelineRunConfig {
    std::vector<CorpusSpec> corpora;
    std::optional<std::filesystem::path> cleaning_config;
    std::optional<std::filesystem::path> stoplist_override;
    std::string query;
    std::size_t batch_size = 50;
    std::size_t min_df = kDefaultMinDf;
    double max_df_ratio = kDefaultMaxDfRatio;
    Index pca_dim = 50;
    ClusterConfig cluster;
    int restarts = 1;
    Index k_min = 1;
    Index k_max = 10;
    int elbow_restarts = 10;
    std::filesystem::path out = "keyclust-out";

    /// Throws InvalidConfig.
    void validate() const;

    /// Cleaning rules: defaults, then the JSON config, then the stoplist override.
    CleaningConfig cleaning() const;
};

/// Stage names inside `<out>/stages`.
namespace stages {
inline constexpr std::string_view kChunks = "chunks";
inline constexpr std::string_view kVocabulary = "vocabulary";
inline constexpr std::string_view kTfIdf = "tfidf";
inline constexpr std::string_view kPca = "pca";
inline constexpr std::string_view kReduced = "reduced";
std::string model(ClusterMode mode);
std::string history(ClusterMode mode);
std::string weights(ClusterMode mode);
}  // namespace stages

/// Each stage reads its inputs from the stage store under `config.out` and
/// writes new files only. Progress goes to `log`.
void run_ingest(const PipelineRunConfig& config, std::ostream& log);
void run_vectorize(const PipelineRunConfig& config, std::ostream& log);
void run_reduce(const PipelineRunConfig& config, std::ostream& log);
void run_cluster(const PipelineRunConfig& config, std::ostream& log);
void run_elbow(const PipelineRunConfig& config, std::ostream& log);
void run_report(const PipelineRunConfig& config, std::ostream& log);

/// ingest, vectorize, reduce, cluster (standard then modified), elbow, report.
void run_all(const PipelineRunConfig& config, std::ostream& log);

}  // namespace keyclust

#endif  // KEYCLUST_PIPELINE_HPP
