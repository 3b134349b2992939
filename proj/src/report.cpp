#include "keyclust/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <set>
#include <unordered_map>

namespace keyclust {

namespace {

void require_aligned(const ClusterModel<double>& model, std::span<const Chunk> chunks) {
    if (model.assignments.size() != chunks.size()) {
        throw LengthMismatch("model has " + std::to_string(model.assignments.size()) + " assignments but " +
                             std::to_string(chunks.size()) + " chunks were given");
    }
}

bool contains_any(const std::vector<std::string>& tokens, std::span<const std::string> terms) {
    return std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
        return std::find(tokens.begin(), tokens.end(), t) != tokens.end();
    });
}

std::vector<TermCount> rank(const std::unordered_map<std::string, std::size_t>& counts, std::size_t n) {
    std::vector<TermCount> all;
    all.reserve(counts.size());
    for (const auto& [term, count] : counts) all.push_back({term, count});
    std::sort(all.begin(), all.end(), [](const TermCount& a, const TermCount& b) {
        return a.count != b.count ? a.count > b.count : a.term < b.term;
    });
    if (all.size() > n) all.resize(n);
    return all;
}

std::string fixed(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
    return std::string(buf.data(), res.ptr);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::vector<TermCount> top_terms(std::span<const Chunk> members, std::size_t n) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& c : members)
        for (const auto& t : c.tokens) ++counts[t];
    return rank(counts, n);
}

std::vector<TermCount> top_terms(std::span<const Chunk> chunks, std::span<const Index> member_indices,
                                 std::size_t n) {
    std::unordered_map<std::string, std::size_t> counts;
    for (Index i : member_indices)
        for (const auto& t : chunks[static_cast<std::size_t>(i)].tokens) ++counts[t];
    return rank(counts, n);
}

std::size_t keyword_search_count(std::span<const Chunk> chunks, std::span<const std::string> query_terms) {
    return static_cast<std::size_t>(std::count_if(
        chunks.begin(), chunks.end(), [&](const Chunk& c) { return contains_any(c.tokens, query_terms); }));
}

std::size_t keyword_search_count(std::span<const Chunk> chunks, std::string_view query_term) {
    const std::string term(query_term);
    return keyword_search_count(chunks, std::span<const std::string>(&term, 1));
}

std::vector<ClusterReport> cluster_reports(const ClusterModel<double>& model, std::span<const Chunk> chunks,
                                           std::size_t n) {
    require_aligned(model, chunks);
    std::vector<ClusterReport> out;
    for (Index c = 0; c < model.k(); ++c) {
        const auto members = model.members(c);
        ClusterReport r;
        r.cluster_index = c;
        r.top_terms = top_terms(chunks, members, n);
        r.member_count = members.size();
        for (Index i : members) r.member_chunk_ids.push_back(chunks[static_cast<std::size_t>(i)].chunk_id);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Index> relevant_clusters(const ClusterModel<double>& model, std::span<const Chunk> chunks,
                                     std::span<const std::string> query_terms, std::size_t n) {
    require_aligned(model, chunks);
    std::vector<Index> out;
    for (Index c = 0; c < model.k(); ++c) {
        const auto terms = top_terms(chunks, model.members(c), n);
        const bool hit = std::any_of(terms.begin(), terms.end(), [&](const TermCount& tc) {
            return std::find(query_terms.begin(), query_terms.end(), tc.term) != query_terms.end();
        });
        if (hit) out.push_back(c);
    }
    return out;
}

Comparison comparison_table(std::span<const Chunk> chunks, std::span<const std::string> query_terms,
                            const ClusterModel<double>& standard, const ClusterModel<double>& modified) {
    require_aligned(standard, chunks);
    require_aligned(modified, chunks);

    Comparison result;
    result.standard_relevant = relevant_clusters(standard, chunks, query_terms);
    result.modified_relevant = relevant_clusters(modified, chunks, query_terms);
    if (result.standard_relevant.empty()) {
        result.warnings.push_back("no relevant cluster in the standard model: no cluster's top terms contain the query");
    }
    if (result.modified_relevant.empty()) {
        result.warnings.push_back("no relevant cluster in the modified model: no cluster's top terms contain the query");
    }

    auto in_relevant = [](const ClusterModel<double>& model, const std::vector<Index>& relevant, std::size_t i) {
        const auto& a = model.assignments[i];
        auto hit = [&](Index c) { return std::find(relevant.begin(), relevant.end(), c) != relevant.end(); };
        return hit(a.primary) || (a.secondary && hit(*a.secondary));
    };

    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        auto [it, inserted] = row_of.emplace(chunks[i].corpus_label, result.rows.size());
        if (inserted) result.rows.push_back({chunks[i].corpus_label});
        auto& row = result.rows[it->second];
        ++row.total_paragraphs;
        if (contains_any(chunks[i].tokens, query_terms)) ++row.search_count;
        if (in_relevant(standard, result.standard_relevant, i)) ++row.standard_kmeans_count;
        if (in_relevant(modified, result.modified_relevant, i)) ++row.modified_kmeans_count;
    }
    return result;
}

std::vector<std::string> extract_cluster_text(const ClusterModel<double>& model, Index cluster_index,
                                              std::span<const Chunk> chunks) {
    if (cluster_index < 0 || cluster_index >= model.k()) {
        throw InvalidClusterIndex("cluster " + std::to_string(cluster_index) + " out of range [0, " +
                                  std::to_string(model.k()) + ")");
    }
    require_aligned(model, chunks);
    std::vector<std::string> out;
    for (Index i : model.members(cluster_index)) out.push_back(chunks[static_cast<std::size_t>(i)].raw_text);
    return out;
}

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows) {
    out << "corpus_label,total_paragraphs,search_count,standard_kmeans_count,modified_kmeans_count\n";
    for (const auto& r : rows) {
        out << csv_field(r.corpus_label) << ',' << r.total_paragraphs << ',' << r.search_count << ','
            << r.standard_kmeans_count << ',' << r.modified_kmeans_count << '\n';
    }
}

void write_elbow_csv(std::ostream& out, std::span<const ElbowPoint<double>> points) {
    out << "k,distortion\n";
    for (const auto& p : points) out << p.k << ',' << format_number(p.distortion) << '\n';
}

void write_cluster_terms_csv(std::ostream& out, std::span<const ClusterReport> reports) {
    out << "cluster,member_count,rank,term,count\n";
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.top_terms.size(); ++i) {
            out << r.cluster_index << ',' << r.member_count << ',' << (i + 1) << ',' << csv_field(r.top_terms[i].term)
                << ',' << r.top_terms[i].count << '\n';
        }
    }
}

void write_iteration_csv(std::ostream& out, const ClusterModel<double>& model, const WeightedPoints<double>& points) {
    out << "iteration,chunk_id,x,y,primary,secondary\n";
    const bool has_y = points.dimension() > 1;
    for (std::size_t t = 0; t < model.history.size(); ++t) {
        const auto& snap = model.history[t];
        for (Index i = 0; i < points.size(); ++i) {
            const auto u = static_cast<std::size_t>(i);
            out << (t + 1) << ',' << csv_field(points.ids[u]) << ',' << format_number(points.coords(i, 0)) << ','
                << format_number(has_y ? points.coords(i, 1) : 0.0) << ',' << snap.primary[u] << ',';
            if (snap.secondary[u] >= 0) out << snap.secondary[u];
            out << '\n';
        }
    }
}

void write_iteration_svg(std::ostream& out, const ClusterModel<double>& model, const WeightedPoints<double>& points,
                         std::size_t iteration) {
    if (iteration < 1 || iteration > model.history.size()) {
        throw InvalidConfig("iteration " + std::to_string(iteration) + " not in history");
    }
    const auto& snap = model.history[iteration - 1];
    const bool has_y = points.dimension() > 1;
    auto ycoord = [&](const RowMatrix<double>& m, Index i) { return has_y ? m(i, 1) : 0.0; };

    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    auto extend = [&](double x, double y) {
        if (first) {
            xmin = xmax = x;
            ymin = ymax = y;
            first = false;
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (Index i = 0; i < points.size(); ++i) extend(points.coords(i, 0), ycoord(points.coords, i));
    for (Index c = 0; c < snap.centroids.rows(); ++c) extend(snap.centroids(c, 0), ycoord(snap.centroids, c));
    if (xmax - xmin <= 0) xmax = xmin + 1;
    if (ymax - ymin <= 0) ymax = ymin + 1;

    constexpr double width = 640, height = 480, pad = 24;
    auto sx = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (width - 2 * pad); };
    auto sy = [&](double y) { return height - pad - (y - ymin) / (ymax - ymin) * (height - 2 * pad); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
    out << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    out << "<text x=\"8\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">iteration " << iteration << "</text>\n";
    out << "<g id=\"points\">\n";
    for (Index i = 0; i < points.size(); ++i) {
        const auto u = static_cast<std::size_t>(i);
        if (snap.secondary[u] >= 0) continue;
        out << "<circle cx=\"" << fixed(sx(points.coords(i, 0))) << "\" cy=\"" << fixed(sy(ycoord(points.coords, i)))
            << "\" r=\"2.5\" fill=\"" << kPalette[static_cast<std::size_t>(snap.primary[u]) % kPalette.size()]
            << "\"/>\n";
    }
    out << "</g>\n<g id=\"dual\">\n";
    for (Index i : snap.dual_points) {
        out << "<circle cx=\"" << fixed(sx(points.coords(i, 0))) << "\" cy=\"" << fixed(sy(ycoord(points.coords, i)))
            << "\" r=\"3\" fill=\"black\"/>\n";
    }
    out << "</g>\n<g id=\"centroids\">\n";
    for (Index c = 0; c < snap.centroids.rows(); ++c) {
        out << "<rect x=\"" << fixed(sx(snap.centroids(c, 0)) - 5) << "\" y=\"" << fixed(sy(ycoord(snap.centroids, c)) - 5)
            << "\" width=\"10\" height=\"10\" fill=\"none\" stroke=\""
            << kPalette[static_cast<std::size_t>(c) % kPalette.size()] << "\" stroke-width=\"2\"/>\n";
    }
    out << "</g>\n</svg>\n";
}

}  // namespace keyclust
