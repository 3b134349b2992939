#ifndef KEYCLUST_REPORT_HPP
#define KEYCLUST_REPORT_HPP

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyclust/cluster.hpp"
#include "keyclust/preprocess.hpp"

namespace keyclust {

struct TermCount {
    std::string term;
    std::size_t count = 0;

    bool operator==(const TermCount&) const = default;
};

inline constexpr std::size_t kTopTermCount = 10;

/// Most frequent tokens across `members`, count descending then term
/// ascending, at most `n` entries.
std::vector<TermCount> top_terms(std::span<const Chunk> members, std::size_t n = kTopTermCount);

/// Same, over the chunks selected by `member_indices`.
std::vector<TermCount> top_terms(std::span<const Chunk> chunks, std::span<const Index> member_indices,
                                 std::size_t n = kTopTermCount);

/// Number of chunks whose tokens contain any of the query terms.
std::size_t keyword_search_count(std::span<const Chunk> chunks, std::span<const std::string> query_terms);
std::size_t keyword_search_count(std::span<const Chunk> chunks, std::string_view query_term);

struct ClusterReport {
    Index cluster_index = 0;
    std::vector<TermCount> top_terms;
    std::vector<std::string> member_chunk_ids;
    std::size_t member_count = 0;
};

/// One report per cluster; members include dual-assigned chunks.
/// `chunks` must be aligned with the model's points. Throws LengthMismatch.
std::vector<ClusterReport> cluster_reports(const ClusterModel<double>& model, std::span<const Chunk> chunks,
                                           std::size_t n = kTopTermCount);

/// Clusters whose top-n terms include a query term.
std::vector<Index> relevant_clusters(const ClusterModel<double>& model, std::span<const Chunk> chunks,
                                     std::span<const std::string> query_terms, std::size_t n = kTopTermCount);

struct ComparisonRow {
    std::string corpus_label;
    std::size_t total_paragraphs = 0;
    std::size_t search_count = 0;
    std::size_t standard_kmeans_count = 0;
    std::size_t modified_kmeans_count = 0;

    bool operator==(const ComparisonRow&) const = default;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    std::vector<Index> standard_relevant;
    std::vector<Index> modified_relevant;
    /// Empty unless a model had no cluster whose top terms contain the query
    /// (the NoRelevantCluster condition); its counts are then zero.
    std::vector<std::string> warnings;
};

/**
 * Per corpus label (in order of first appearance): chunk total, keyword
 * search count, and for each model the number of distinct chunks belonging
 * to a query-relevant cluster. Both models must be fitted on points aligned
 * with `chunks`.
 */
Comparison comparison_table(std::span<const Chunk> chunks, std::span<const std::string> query_terms,
                            const ClusterModel<double>& standard, const ClusterModel<double>& modified);

/// Raw text of the cluster's members (primary or secondary) in corpus order.
/// Throws InvalidClusterIndex.
std::vector<std::string> extract_cluster_text(const ClusterModel<double>& model, Index cluster_index,
                                              std::span<const Chunk> chunks);

/// Shortest round-trip decimal form, locale independent.
std::string format_number(double value);

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows);
void write_elbow_csv(std::ostream& out, std::span<const ElbowPoint<double>> points);
void write_cluster_terms_csv(std::ostream& out, std::span<const ClusterReport> reports);

/// Rows of (iteration, chunk_id, x, y, primary, secondary) for every
/// iteration in the model history; secondary is empty for single
/// assignments. x and y are the first two coordinates (y = 0 in 1-D).
void write_iteration_csv(std::ostream& out, const ClusterModel<double>& model, const WeightedPoints<double>& points);

/// 2-D scatter of one iteration: points coloured by primary cluster,
/// dual-assigned points in a separate black series, centroids as squares.
void write_iteration_svg(std::ostream& out, const ClusterModel<double>& model, const WeightedPoints<double>& points,
                         std::size_t iteration);

}  // namespace keyclust

#endif  // KEYCLUST_REPORT_HPP
