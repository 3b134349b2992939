#ifndef KEYCLUST_TESTS_ORACLES_HPP
#define KEYCLUST_TESTS_ORACLES_HPP

// Independent reference implementations written with plain loops and
// standard containers. They share no code with the library.

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

inline double sq_dist(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct LloydResult {
    std::vector<Point> centroids;
    std::vector<int> labels;
    int iterations = 0;
    bool converged = false;
};

/**
 * Textbook Lloyd iteration from fixed initial centroids: nearest centroid
 * with ties to the lowest index, plain means, an empty cluster moves to the
 * point farthest from its nearest centroid (lowest index on ties, each point
 * used once), stop when the summed centroid movement is below epsilon.
 * Labels are recomputed against the final centroids.
 */
inline LloydResult lloyd(const std::vector<Point>& points, std::vector<Point> centroids, double epsilon,
                         int max_iter) {
    const std::size_t n = points.size();
    const std::size_t k = centroids.size();
    const std::size_t dim = centroids.empty() ? 0 : centroids[0].size();

    auto nearest = [&](const Point& p, double& best) {
        int arg = 0;
        best = std::sqrt(sq_dist(p, centroids[0]));
        for (std::size_t c = 1; c < k; ++c) {
            const double d = std::sqrt(sq_dist(p, centroids[c]));
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        return arg;
    };

    LloydResult r;
    for (int it = 0; it < max_iter; ++it) {
        std::vector<int> labels(n);
        std::vector<double> dist(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = nearest(points[i], dist[i]);

        std::vector<Point> next = centroids;
        std::vector<bool> used(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            Point sum(dim, 0.0);
            double count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (labels[i] != static_cast<int>(c)) continue;
                for (std::size_t j = 0; j < dim; ++j) sum[j] += points[i][j];
                count += 1;
            }
            if (count > 0) {
                for (std::size_t j = 0; j < dim; ++j) next[c][j] = sum[j] / count;
                continue;
            }
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i]) continue;
                if (far == n || dist[i] > dist[far]) far = i;
            }
            if (far < n) {
                used[far] = true;
                next[c] = points[far];
            }
        }

        double movement = 0;
        for (std::size_t c = 0; c < k; ++c) movement += std::sqrt(sq_dist(next[c], centroids[c]));
        centroids = next;
        ++r.iterations;
        if (movement < epsilon) {
            r.converged = true;
            break;
        }
    }
    r.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0;
        r.labels[i] = nearest(points[i], d);
    }
    r.centroids = centroids;
    return r;
}

inline double inertia(const std::vector<Point>& points, const std::vector<Point>& centroids,
                      const std::vector<int>& labels) {
    double s = 0;
    for (std::size_t i = 0; i < points.size(); ++i) s += sq_dist(points[i], centroids[static_cast<std::size_t>(labels[i])]);
    return s;
}

/// Number of token lists containing each term at least once.
inline std::map<std::string, std::size_t> document_frequencies(const std::vector<std::vector<std::string>>& docs) {
    std::map<std::string, std::size_t> df;
    for (const auto& d : docs) {
        std::set<std::string> seen(d.begin(), d.end());
        for (const auto& t : seen) ++df[t];
    }
    return df;
}

/// Total occurrences of each term.
inline std::map<std::string, std::size_t> term_counts(const std::vector<std::vector<std::string>>& docs) {
    std::map<std::string, std::size_t> counts;
    for (const auto& d : docs)
        for (const auto& t : d) ++counts[t];
    return counts;
}

}  // namespace oracle

#endif  // KEYCLUST_TESTS_ORACLES_HPP
