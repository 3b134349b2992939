#ifndef KEYCLUST_REDUCE_HPP
#define KEYCLUST_REDUCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "keyclust/errors.hpp"
#include "keyclust/types.hpp"

namespace keyclust {

/// Mean-centred projection onto the leading principal directions.
template <typename Scalar>
struct PcaModel {
    Vector<Scalar> mean;                 // length V
    Matrix<Scalar> components;           // V x d, one unit component per column
    Vector<Scalar> explained_variance;   // length d, non-increasing
    bool degenerate = false;             // every input vector was identical

    Index input_size() const { return mean.size(); }
    Index dimension() const { return components.cols(); }
};

struct PcaOptions {
    double tolerance = 1e-10;
    int max_iterations = 1000;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

namespace detail {

/// Cyclic Jacobi eigen-decomposition of a small symmetric matrix. Returns the
/// eigenvalues sorted descending with matching eigenvector columns.
template <typename Scalar>
std::pair<Vector<Scalar>, Matrix<Scalar>> jacobi_eigen(Matrix<Scalar> a) {
    const Index n = a.rows();
    Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
    const Scalar scale = a.norm();
    for (int sweep = 0; sweep < 100 && scale > 0; ++sweep) {
        Scalar off = 0;
        for (Index p = 0; p < n; ++p)
            for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= std::numeric_limits<Scalar>::epsilon() * scale) break;

        for (Index p = 0; p < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                if (a(p, q) == Scalar(0)) continue;
                const Scalar theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
                const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
                const Scalar s = t * c;
                for (Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Index k = 0; k < n; ++k) {
                    const Scalar vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return a(x, x) > a(y, y); });
    Vector<Scalar> values(n);
    Matrix<Scalar> vectors(n, n);
    for (Index i = 0; i < n; ++i) {
        values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return {values, vectors};
}

/// Modified Gram-Schmidt on the first `count` columns, in place.
template <typename Scalar>
void orthonormalize_columns(Matrix<Scalar>& m, Index count) {
    for (Index j = 0; j < count; ++j) {
        for (Index i = 0; i < j; ++i) m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
        m.col(j).normalize();
    }
}

/// Flips each column so its largest-magnitude entry (first on ties) is positive.
template <typename Scalar>
void canonicalize_signs(Matrix<Scalar>& m) {
    for (Index j = 0; j < m.cols(); ++j) {
        Index best = 0;
        for (Index i = 1; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > std::abs(m(best, j))) best = i;
        }
        if (m(best, j) < 0) m.col(j) = -m.col(j);
    }
}

}  // namespace detail

/**
 * Fits the top-`d` principal components of the rows of `data` (n x V, dense or
 * sparse). The covariance is applied implicitly through the data matrix and
 * never formed. Each component is found by power iteration on the covariance
 * with Gram-Schmidt deflation against the components already found, followed
 * by a Rayleigh-Ritz rotation within the recovered subspace so that nearly
 * equal eigenvalues are still separated cleanly.
 *
 * Throws DimensionTooLarge unless 1 <= d <= min(V, n - 1).
 */
template <typename Derived>
PcaModel<typename Derived::Scalar> fit_pca(const Eigen::EigenBase<Derived>& input, Index d, PcaOptions options = {}) {
    using Scalar = typename Derived::Scalar;
    const Derived& data = input.derived();
    const Index n = data.rows();
    const Index dims = data.cols();
    if (d < 1 || n < 2 || d > std::min<Index>(dims, n - 1)) {
        throw DimensionTooLarge("PCA dimension " + std::to_string(d) + " outside [1, min(V=" + std::to_string(dims) +
                                ", n-1=" + std::to_string(n - 1) + ")]");
    }

    PcaModel<Scalar> model;
    const Vector<Scalar> ones = Vector<Scalar>::Ones(n);
    model.mean = (data.transpose() * ones) / static_cast<Scalar>(n);

    auto covariance_times = [&](const Vector<Scalar>& v) -> Vector<Scalar> {
        Vector<Scalar> u = data * v;
        u.array() -= model.mean.dot(v);
        Vector<Scalar> out = data.transpose() * u;
        out -= model.mean * u.sum();
        return out / static_cast<Scalar>(n - 1);
    };

    // Total variance (trace of the covariance) sets the scale for "zero".
    const Scalar frob2 = data.squaredNorm();
    const Scalar total_variance =
        std::max<Scalar>(0, (frob2 - static_cast<Scalar>(n) * model.mean.squaredNorm()) / static_cast<Scalar>(n - 1));
    const Scalar zero_level =
        Scalar(64) * std::numeric_limits<Scalar>::epsilon() * std::max<Scalar>(frob2 / static_cast<Scalar>(n - 1), 1e-300);

    model.components = Matrix<Scalar>::Zero(dims, d);
    model.explained_variance = Vector<Scalar>::Zero(d);

    if (total_variance <= zero_level) {
        model.degenerate = true;
        for (Index j = 0; j < d; ++j) model.components(j, j) = 1;
        return model;
    }

    std::mt19937_64 rng(options.seed);
    auto uniform = [&rng]() { return static_cast<Scalar>(rng() >> 11) * Scalar(0x1.0p-53) * 2 - 1; };

    auto deflate = [&](Vector<Scalar>& v, Index found) {
        if (found == 0) return;
        auto basis = model.components.leftCols(found);
        v -= basis * (basis.transpose() * v);
    };

    for (Index j = 0; j < d; ++j) {
        Vector<Scalar> v(dims);
        for (Index i = 0; i < dims; ++i) v(i) = uniform();
        deflate(v, j);
        deflate(v, j);
        v.normalize();

        for (int it = 0; it < options.max_iterations; ++it) {
            Vector<Scalar> w = covariance_times(v);
            deflate(w, j);
            const Scalar norm = w.norm();
            if (norm <= zero_level) break;  // no variance left orthogonal to earlier components
            w /= norm;
            const Scalar change = (w - v).norm();
            v = std::move(w);
            if (change < options.tolerance) break;
        }
        deflate(v, j);
        model.components.col(j) = v.normalized();
    }

    // Rayleigh-Ritz refinement within span(components).
    Matrix<Scalar> projected(dims, d);
    for (Index j = 0; j < d; ++j) projected.col(j) = covariance_times(model.components.col(j));
    Matrix<Scalar> small = model.components.transpose() * projected;
    small = (small + small.transpose().eval()) / Scalar(2);
    auto [values, rotation] = detail::jacobi_eigen<Scalar>(small);
    model.components = (model.components * rotation).eval();
    detail::orthonormalize_columns(model.components, d);
    detail::canonicalize_signs(model.components);
    model.explained_variance = values.cwiseMax(Scalar(0));
    for (Index j = 1; j < d; ++j) {
        model.explained_variance(j) = std::min(model.explained_variance(j), model.explained_variance(j - 1));
    }
    return model;
}

/// Coordinates of one vector: components^T (x - mean). Throws LengthMismatch.
template <typename Scalar, typename Derived>
Vector<Scalar> pca_transform(const Eigen::MatrixBase<Derived>& x, const PcaModel<Scalar>& model) {
    if (x.size() != model.input_size()) {
        throw LengthMismatch("vector length " + std::to_string(x.size()) + " does not match PCA input size " +
                             std::to_string(model.input_size()));
    }
    return model.components.transpose() * (x - model.mean);
}

/// Projects every row of `data` (dense or sparse).
template <typename Scalar, typename Derived>
RowMatrix<Scalar> pca_transform_rows(const Eigen::EigenBase<Derived>& input, const PcaModel<Scalar>& model) {
    const Derived& data = input.derived();
    if (data.cols() != model.input_size()) {
        throw LengthMismatch("data width " + std::to_string(data.cols()) + " does not match PCA input size " +
                             std::to_string(model.input_size()));
    }
    RowMatrix<Scalar> out = data * model.components;
    const Vector<Scalar> shift = model.components.transpose() * model.mean;
    out.rowwise() -= shift.transpose();
    return out;
}

/// Sum of squared residuals after projecting onto the model and back.
template <typename Scalar, typename Derived>
Scalar reconstruction_error(const Eigen::MatrixBase<Derived>& data, const PcaModel<Scalar>& model) {
    Matrix<Scalar> centred = data.rowwise() - model.mean.transpose();
    Matrix<Scalar> back = (centred * model.components) * model.components.transpose();
    return (centred - back).squaredNorm();
}

}  // namespace keyclust

#endif  // KEYCLUST_REDUCE_HPP
