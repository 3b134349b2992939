#ifndef KEYCLUST_CLUSTER_HPP
#define KEYCLUST_CLUSTER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "keyclust/errors.hpp"
#include "keyclust/types.hpp"
#include "keyclust/weighting.hpp"

namespace keyclust {

enum class ClusterMode { Modified, Standard };
enum class Seeding { RandomDistinct, Partial };

std::string_view to_string(ClusterMode mode);
std::string_view to_string(Seeding seeding);
ClusterMode parse_cluster_mode(std::string_view name);
Seeding parse_seeding(std::string_view name);

struct ClusterConfig {
    Index k = 5;
    double threshold = 0.01;       // dual-assignment distance gap
    double damping_weight = 0.01;  // weight of the previous centroid in the update
    double epsilon = 1e-4;         // bound on the summed centroid movement
    int max_iter = 300;
    ClusterMode mode = ClusterMode::Modified;
    Seeding seeding = Seeding::RandomDistinct;
    std::uint64_t seed = 0;
    bool raw_denominator = false;  // divide by member count instead of weight mass
    unsigned threads = 1;

    /// Standard mode ignores threshold, damping, raw_denominator and weights.
    ClusterConfig effective() const {
        ClusterConfig c = *this;
        if (mode == ClusterMode::Standard) {
            c.threshold = 0.0;
            c.damping_weight = 0.0;
            c.raw_denominator = false;
        }
        return c;
    }

    /// Throws InvalidConfig.
    void validate() const {
        if (k < 1) throw InvalidConfig("k must be at least 1");
        if (!(threshold >= 0.0) || !std::isfinite(threshold)) throw InvalidConfig("threshold must be >= 0");
        if (!(damping_weight >= 0.0) || !std::isfinite(damping_weight)) throw InvalidConfig("damping must be >= 0");
        if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be > 0");
        if (max_iter < 1) throw InvalidConfig("max_iter must be at least 1");
    }
};

/// Exact element-wise equality that tolerates differing shapes.
template <typename Scalar>
bool same_matrix(const RowMatrix<Scalar>& a, const RowMatrix<Scalar>& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || (a.array() == b.array()).all());
}

template <typename Scalar>
struct Assignment {
    Index primary = 0;
    std::optional<Index> secondary;
    Scalar d_primary = 0;
    Scalar d_secondary = 0;  // second-nearest distance; equals d_primary when k == 1

    bool dual() const { return secondary.has_value(); }
    bool operator==(const Assignment&) const = default;
};

template <typename Scalar>
struct IterationSnapshot {
    RowMatrix<Scalar> centroids;      // after this iteration's update
    std::vector<Index> primary;       // per point
    std::vector<Index> secondary;     // per point, -1 when single-assigned
    std::vector<Index> dual_points;   // points assigned to two clusters
    std::vector<Index> reseeded;      // clusters that were empty and got reseeded
    Scalar movement = 0;              // summed centroid displacement

    bool operator==(const IterationSnapshot& o) const {
        return same_matrix(centroids, o.centroids) && primary == o.primary && secondary == o.secondary &&
               dual_points == o.dual_points && reseeded == o.reseeded && movement == o.movement;
    }
};

template <typename Scalar>
struct ClusterModel {
    RowMatrix<Scalar> centroids;
    std::vector<Assignment<Scalar>> assignments;
    Index iterations = 0;
    std::vector<IterationSnapshot<Scalar>> history;
    Scalar distortion = 0;
    bool converged = false;

    Index k() const { return centroids.rows(); }

    /// Points whose primary or secondary cluster is `cluster`, ascending.
    std::vector<Index> members(Index cluster) const {
        std::vector<Index> out;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            const auto& a = assignments[i];
            if (a.primary == cluster || a.secondary == cluster) out.push_back(static_cast<Index>(i));
        }
        return out;
    }

    bool operator==(const ClusterModel& o) const {
        return same_matrix(centroids, o.centroids) && assignments == o.assignments && iterations == o.iterations &&
               history == o.history && distortion == o.distortion && converged == o.converged;
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Runs fn(i) for i in [0, n); the index range is split into contiguous
/// blocks, one per thread. fn must only write state owned by index i.
template <typename Fn>
void parallel_for(Index n, unsigned threads, Fn&& fn) {
    const Index workers = std::min<Index>(static_cast<Index>(std::max(threads, 1u)), n);
    if (workers <= 1 || n < 256) {
        for (Index i = 0; i < n; ++i) fn(i);
        return;
    }
    const Index block = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w) {
        const Index begin = w * block;
        const Index end = std::min(n, begin + block);
        pool.emplace_back([&fn, begin, end] {
            for (Index i = begin; i < end; ++i) fn(i);
        });
    }
}

/// Indices of the first occurrence of each distinct row, ascending.
template <typename Scalar>
std::vector<Index> distinct_rows(const RowMatrix<Scalar>& rows) {
    std::vector<Index> order(static_cast<std::size_t>(rows.rows()));
    std::iota(order.begin(), order.end(), Index(0));
    auto less = [&](Index a, Index b) {
        for (Index c = 0; c < rows.cols(); ++c) {
            if (rows(a, c) != rows(b, c)) return rows(a, c) < rows(b, c);
        }
        return false;
    };
    std::stable_sort(order.begin(), order.end(), less);
    std::vector<Index> firsts;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || less(order[i - 1], order[i])) firsts.push_back(order[i]);
    }
    std::sort(firsts.begin(), firsts.end());
    return firsts;
}

template <typename Scalar>
void require_finite(const WeightedPoints<Scalar>& points) {
    if (!points.coords.allFinite()) throw NonFiniteInput("point coordinates contain NaN or infinity");
    if (points.weights.size() != points.size()) throw LengthMismatch("one weight per point is required");
    if (!points.weights.allFinite() || (points.weights.array() < 0).any()) {
        throw NonFiniteInput("weights must be finite and non-negative");
    }
}

}  // namespace detail

/**
 * Nearest and second-nearest centroid by Euclidean distance, ties to the
 * lower cluster index. The point is also given to the second-nearest cluster
 * when the distance gap is strictly below `threshold`.
 */
template <typename Scalar, typename Derived>
Assignment<Scalar> assign_point(const Eigen::MatrixBase<Derived>& point, const RowMatrix<Scalar>& centroids,
                                Scalar threshold) {
    constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
    Scalar d1 = inf, d2 = inf;
    Index i1 = 0, i2 = -1;
    for (Index j = 0; j < centroids.rows(); ++j) {
        const Scalar d = std::sqrt((centroids.row(j) - point.transpose()).squaredNorm());
        if (d < d1) {
            d2 = d1;
            i2 = i1;
            d1 = d;
            i1 = j;
        } else if (d < d2 || i2 < 0) {
            d2 = d;
            i2 = j;
        }
    }
    Assignment<Scalar> a;
    a.primary = i1;
    a.d_primary = d1;
    if (centroids.rows() < 2) {
        a.d_secondary = d1;
        return a;
    }
    a.d_secondary = d2;
    if (d2 - d1 < threshold) a.secondary = i2;
    return a;
}

/// Per-cluster member lists (primary and secondary), each ascending.
template <typename Scalar>
std::vector<std::vector<Index>> cluster_members(const std::vector<Assignment<Scalar>>& assignments, Index k) {
    std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        members[static_cast<std::size_t>(assignments[i].primary)].push_back(static_cast<Index>(i));
        if (assignments[i].secondary) {
            members[static_cast<std::size_t>(*assignments[i].secondary)].push_back(static_cast<Index>(i));
        }
    }
    return members;
}

template <typename Scalar>
struct CentroidUpdate {
    RowMatrix<Scalar> centroids;
    std::vector<bool> empty;  // cluster had no members (or no weight mass) and kept its previous centroid
};

/**
 * Damped weighted mean per cluster:
 *   c_i = (sum_j w_j x_j + damping * c_i_prev) / (sum_j w_j + damping)
 * over the listed members. With `raw_denominator` the weight mass sum_j w_j
 * is replaced by the member count. Members are folded in list order.
 */
template <typename Scalar>
CentroidUpdate<Scalar> update_centroids(const RowMatrix<Scalar>& coords, const Vector<Scalar>& weights,
                                        const std::vector<std::vector<Index>>& members,
                                        const RowMatrix<Scalar>& previous, Scalar damping,
                                        bool raw_denominator = false) {
    CentroidUpdate<Scalar> out;
    out.centroids = previous;
    out.empty.assign(static_cast<std::size_t>(previous.rows()), false);
    for (Index c = 0; c < previous.rows(); ++c) {
        const auto& list = members[static_cast<std::size_t>(c)];
        Vector<Scalar> acc = Vector<Scalar>::Zero(previous.cols());
        Scalar mass = 0;
        for (Index j : list) {
            acc += weights(j) * coords.row(j).transpose();
            mass += weights(j);
        }
        const Scalar denom = raw_denominator ? static_cast<Scalar>(list.size()) : mass;
        if (list.empty() || !(denom + damping > 0)) {
            out.empty[static_cast<std::size_t>(c)] = true;
            continue;
        }
        out.centroids.row(c) = ((acc + damping * previous.row(c).transpose()) / (denom + damping)).transpose();
    }
    return out;
}

template <typename Scalar>
std::vector<Assignment<Scalar>> assign_all(const RowMatrix<Scalar>& coords, const RowMatrix<Scalar>& centroids,
                                           Scalar threshold, unsigned threads = 1) {
    std::vector<Assignment<Scalar>> out(static_cast<std::size_t>(coords.rows()));
    detail::parallel_for(coords.rows(), threads, [&](Index i) {
        out[static_cast<std::size_t>(i)] = assign_point(coords.row(i).transpose(), centroids, threshold);
    });
    return out;
}

/// Sum of squared distances to the assigned centroids; a dual-assigned point
/// contributes once per cluster.
template <typename Scalar>
Scalar distortion(const ClusterModel<Scalar>& model, const WeightedPoints<Scalar>& points) {
    Scalar total = 0;
    for (std::size_t i = 0; i < model.assignments.size(); ++i) {
        const auto& a = model.assignments[i];
        const auto x = points.coords.row(static_cast<Index>(i));
        total += (x - model.centroids.row(a.primary)).squaredNorm();
        if (a.secondary) total += (x - model.centroids.row(*a.secondary)).squaredNorm();
    }
    return total;
}

/// Distortion counting primary assignments only.
template <typename Scalar>
Scalar primary_distortion(const ClusterModel<Scalar>& model, const WeightedPoints<Scalar>& points) {
    Scalar total = 0;
    for (std::size_t i = 0; i < model.assignments.size(); ++i) {
        total += (points.coords.row(static_cast<Index>(i)) - model.centroids.row(model.assignments[i].primary))
                     .squaredNorm();
    }
    return total;
}

/**
 * Iterates assignment and centroid update from the given centroids until the
 * summed centroid movement drops below epsilon or max_iter is reached. Empty
 * clusters are reseeded to the point farthest from its nearest centroid.
 * After the loop every point is assigned once more against the final
 * centroids; those assignments and their distortion are reported.
 */
template <typename Scalar>
ClusterModel<Scalar> run_from(const WeightedPoints<Scalar>& points, const ClusterConfig& config,
                              RowMatrix<Scalar> centroids) {
    config.validate();
    detail::require_finite(points);
    if (centroids.rows() != config.k || centroids.cols() != points.dimension()) {
        throw LengthMismatch("initial centroids must be k x dimension");
    }
    if (!centroids.allFinite()) throw NonFiniteInput("initial centroids contain NaN or infinity");

    const ClusterConfig cfg = config.effective();
    const auto threshold = static_cast<Scalar>(cfg.threshold);
    const auto damping = static_cast<Scalar>(cfg.damping_weight);
    const Vector<Scalar> weights =
        cfg.mode == ClusterMode::Standard ? Vector<Scalar>::Ones(points.size()) : points.weights;

    ClusterModel<Scalar> model;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        auto assignments = assign_all(points.coords, centroids, threshold, cfg.threads);
        auto members = cluster_members(assignments, cfg.k);
        auto update = update_centroids(points.coords, weights, members, centroids, damping, cfg.raw_denominator);

        IterationSnapshot<Scalar> snap;
        std::vector<bool> taken(assignments.size(), false);
        for (Index c = 0; c < cfg.k; ++c) {
            if (!update.empty[static_cast<std::size_t>(c)]) continue;
            Index far = -1;
            for (std::size_t i = 0; i < assignments.size(); ++i) {
                if (taken[i]) continue;
                if (far < 0 || assignments[i].d_primary > assignments[static_cast<std::size_t>(far)].d_primary) {
                    far = static_cast<Index>(i);
                }
            }
            if (far >= 0) {
                taken[static_cast<std::size_t>(far)] = true;
                update.centroids.row(c) = points.coords.row(far);
                snap.reseeded.push_back(c);
            }
        }

        Scalar movement = 0;
        for (Index c = 0; c < cfg.k; ++c) movement += (update.centroids.row(c) - centroids.row(c)).norm();

        snap.primary.reserve(assignments.size());
        snap.secondary.reserve(assignments.size());
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            snap.primary.push_back(assignments[i].primary);
            snap.secondary.push_back(assignments[i].secondary.value_or(-1));
            if (assignments[i].secondary) snap.dual_points.push_back(static_cast<Index>(i));
        }
        snap.centroids = update.centroids;
        snap.movement = movement;
        model.history.push_back(std::move(snap));

        centroids = std::move(update.centroids);
        ++model.iterations;
        if (movement < static_cast<Scalar>(cfg.epsilon)) {
            model.converged = true;
            break;
        }
    }

    model.centroids = std::move(centroids);
    model.assignments = assign_all(points.coords, model.centroids, threshold, cfg.threads);
    model.distortion = distortion(model, points);
    return model;
}

template <typename Scalar>
ClusterModel<Scalar> run(const WeightedPoints<Scalar>& points, const ClusterConfig& config);

/**
 * Initial centroids.
 *  - RandomDistinct: k distinct input points drawn with a seeded RNG.
 *  - Partial: standard K-means on a seeded random subset of 20% of the points
 *    (at least 2k); its final centroids seed the full run.
 * Throws TooFewDistinctPoints when fewer than k distinct points exist.
 */
template <typename Scalar>
RowMatrix<Scalar> init_centroids(const WeightedPoints<Scalar>& points, const ClusterConfig& config) {
    config.validate();
    const auto distinct = detail::distinct_rows(points.coords);
    if (static_cast<Index>(distinct.size()) < config.k) {
        throw TooFewDistinctPoints("need " + std::to_string(config.k) + " distinct points, have " +
                                   std::to_string(distinct.size()));
    }
    std::mt19937_64 rng(config.seed);
    auto pick = [&rng](std::vector<Index>& pool, Index count) {
        for (Index i = 0; i < count; ++i) {
            const auto remaining = static_cast<std::uint64_t>(pool.size()) - static_cast<std::uint64_t>(i);
            const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng() % remaining);
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        pool.resize(static_cast<std::size_t>(count));
    };

    if (config.seeding == Seeding::RandomDistinct) {
        auto pool = distinct;
        pick(pool, config.k);
        RowMatrix<Scalar> centroids(config.k, points.dimension());
        for (Index c = 0; c < config.k; ++c) centroids.row(c) = points.coords.row(pool[static_cast<std::size_t>(c)]);
        return centroids;
    }

    const Index n = points.size();
    const Index wanted = std::min<Index>(n, std::max<Index>(2 * config.k, (n + 4) / 5));
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index(0));
    pick(pool, wanted);
    std::sort(pool.begin(), pool.end());

    WeightedPoints<Scalar> subset;
    subset.coords.resize(static_cast<Index>(pool.size()), points.dimension());
    subset.weights = Vector<Scalar>::Ones(static_cast<Index>(pool.size()));
    for (std::size_t i = 0; i < pool.size(); ++i) {
        subset.coords.row(static_cast<Index>(i)) = points.coords.row(pool[i]);
        subset.ids.push_back(points.ids.empty() ? std::to_string(pool[i]) : points.ids[static_cast<std::size_t>(pool[i])]);
    }
    if (static_cast<Index>(detail::distinct_rows(subset.coords).size()) < config.k) {
        subset.coords = points.coords;
        subset.weights = Vector<Scalar>::Ones(n);
        subset.ids = points.ids;
    }

    ClusterConfig sub = config;
    sub.mode = ClusterMode::Standard;
    sub.seeding = Seeding::RandomDistinct;
    sub.seed = rng();
    return run(subset, sub).centroids;
}

template <typename Scalar>
ClusterModel<Scalar> run(const WeightedPoints<Scalar>& points, const ClusterConfig& config) {
    detail::require_finite(points);
    return run_from(points, config, init_centroids(points, config));
}

/// Seed for restart `restart` at cluster count `k`, derived from `base`.
inline std::uint64_t restart_seed(std::uint64_t base, Index k, int restart) {
    return detail::splitmix64(base ^ detail::splitmix64((static_cast<std::uint64_t>(k) << 32) ^
                                                        static_cast<std::uint64_t>(restart)));
}

/// Best (lowest distortion, earliest on ties) of `restarts` seeded runs.
/// With one restart the run uses `config.seed` unchanged.
template <typename Scalar>
ClusterModel<Scalar> fit_best(const WeightedPoints<Scalar>& points, const ClusterConfig& config, int restarts) {
    if (restarts < 1) throw InvalidConfig("restarts must be at least 1");
    std::optional<ClusterModel<Scalar>> best;
    for (int r = 0; r < restarts; ++r) {
        ClusterConfig c = config;
        if (restarts > 1) c.seed = restart_seed(config.seed, config.k, r);
        auto m = run(points, c);
        if (!best || m.distortion < best->distortion) best = std::move(m);
    }
    return std::move(*best);
}

template <typename Scalar>
struct ElbowPoint {
    Index k = 0;
    Scalar distortion = 0;
};

/**
 * Best distortion for every k in [k_min, k_max] over `restarts` seeded runs.
 * For k > k_min one extra candidate is warm-started from the best k-1
 * centroids plus the point farthest from its nearest centroid. In standard
 * mode that candidate can only lower the distortion, so the curve is
 * non-increasing in k.
 */
template <typename Scalar>
std::vector<ElbowPoint<Scalar>> elbow_scan(const WeightedPoints<Scalar>& points, const ClusterConfig& config,
                                           Index k_min, Index k_max, int restarts) {
    if (k_min < 1 || k_max < k_min) throw InvalidConfig("k range must satisfy 1 <= k_min <= k_max");
    if (restarts < 1) throw InvalidConfig("restarts must be at least 1");
    detail::require_finite(points);
    const auto distinct = detail::distinct_rows(points.coords);
    if (static_cast<Index>(distinct.size()) < k_max) {
        throw TooFewDistinctPoints("k_max " + std::to_string(k_max) + " exceeds the " +
                                   std::to_string(distinct.size()) + " distinct points");
    }

    std::vector<ElbowPoint<Scalar>> out;
    std::optional<ClusterModel<Scalar>> previous;
    for (Index k = k_min; k <= k_max; ++k) {
        ClusterConfig c = config;
        c.k = k;
        std::optional<ClusterModel<Scalar>> best;
        for (int r = 0; r < restarts; ++r) {
            c.seed = restart_seed(config.seed, k, r);
            auto m = run(points, c);
            if (!best || m.distortion < best->distortion) best = std::move(m);
        }
        if (previous) {
            Index far = -1;
            for (std::size_t i = 0; i < previous->assignments.size(); ++i) {
                const auto d = previous->assignments[i].d_primary;
                if (d > 0 && (far < 0 || d > previous->assignments[static_cast<std::size_t>(far)].d_primary)) {
                    far = static_cast<Index>(i);
                }
            }
            if (far >= 0) {
                RowMatrix<Scalar> init(k, points.dimension());
                init.topRows(k - 1) = previous->centroids;
                init.row(k - 1) = points.coords.row(far);
                auto m = run_from(points, c, std::move(init));
                if (m.distortion < best->distortion) best = std::move(m);
            }
        }
        out.push_back({k, best->distortion});
        previous = std::move(best);
    }
    return out;
}

}  // namespace keyclust

#endif  // KEYCLUST_CLUSTER_HPP
