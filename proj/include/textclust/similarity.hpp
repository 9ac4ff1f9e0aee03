// The two interchangeable similarity measures over sparse document vectors:
// cosine and fuzzy (sigma-count Jaccard with min/max as intersection/union).
//
// Both kernels walk the merged support of the two vectors in index order, so
// similarity(a, b) and similarity(b, a) are bitwise identical and results do
// not depend on call context.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace textclust {

enum class MeasureKind { Cosine, Fuzzy };

constexpr std::string_view measure_name(MeasureKind kind) {
    return kind == MeasureKind::Cosine ? "cosine" : "fuzzy";
}

/// dot(a,b) / (|a|*|b|). For unit-normalized inputs this is the plain dot
/// product; the norms are accumulated anyway so the formula holds for raw
/// vectors too. Nonnegative components keep the result in [0, 1].
template <typename DerivedA, typename DerivedB>
double cosine_similarity(const Eigen::SparseMatrixBase<DerivedA>& a,
                         const Eigen::SparseMatrixBase<DerivedB>& b) {
    Eigen::InnerIterator<DerivedA> ia(a.derived(), 0);
    Eigen::InnerIterator<DerivedB> ib(b.derived(), 0);
    double dot = 0.0, na = 0.0, nb = 0.0;
    while (ia && ib) {
        if (ia.index() < ib.index()) {
            na += ia.value() * ia.value();
            ++ia;
        } else if (ib.index() < ia.index()) {
            nb += ib.value() * ib.value();
            ++ib;
        } else {
            dot += ia.value() * ib.value();
            na += ia.value() * ia.value();
            nb += ib.value() * ib.value();
            ++ia;
            ++ib;
        }
    }
    for (; ia; ++ia) na += ia.value() * ia.value();
    for (; ib; ++ib) nb += ib.value() * ib.value();
    if (na == 0.0 || nb == 0.0)
        throw std::runtime_error("cosine_similarity: zero vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Sigma-count Jaccard: sum of pointwise minima over sum of pointwise maxima
/// across the union of supports. Terms absent from a vector contribute
/// membership 0, so only the merged support needs visiting.
template <typename DerivedA, typename DerivedB>
double fuzzy_similarity(const Eigen::SparseMatrixBase<DerivedA>& a,
                        const Eigen::SparseMatrixBase<DerivedB>& b) {
    Eigen::InnerIterator<DerivedA> ia(a.derived(), 0);
    Eigen::InnerIterator<DerivedB> ib(b.derived(), 0);
    double min_sum = 0.0, max_sum = 0.0;
    while (ia && ib) {
        if (ia.index() < ib.index()) {
            max_sum += ia.value();
            ++ia;
        } else if (ib.index() < ia.index()) {
            max_sum += ib.value();
            ++ib;
        } else {
            min_sum += std::fmin(ia.value(), ib.value());
            max_sum += std::fmax(ia.value(), ib.value());
            ++ia;
            ++ib;
        }
    }
    for (; ia; ++ia) max_sum += ia.value();
    for (; ib; ++ib) max_sum += ib.value();
    if (max_sum == 0.0)
        throw std::runtime_error("fuzzy_similarity: both vectors empty");
    return min_sum / max_sum;
}

template <typename DerivedA, typename DerivedB>
double similarity(MeasureKind kind, const Eigen::SparseMatrixBase<DerivedA>& a,
                  const Eigen::SparseMatrixBase<DerivedB>& b) {
    return kind == MeasureKind::Cosine ? cosine_similarity(a, b) : fuzzy_similarity(a, b);
}

// Sparse-against-dense kernels for the k-means inner loop, where centroids
// are dense. Per-centroid constants (norm, component sum) are hoisted by the
// caller so each call is O(nnz of the sparse side).

template <typename Derived>
double cosine_to_dense(const Eigen::SparseMatrixBase<Derived>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& c, double c_norm) {
    double dot = 0.0, na = 0.0;
    for (Eigen::InnerIterator<Derived> it(a.derived(), 0); it; ++it) {
        dot += it.value() * c[it.index()];
        na += it.value() * it.value();
    }
    if (na == 0.0 || c_norm == 0.0)
        throw std::runtime_error("cosine_to_dense: zero vector");
    return dot / (std::sqrt(na) * c_norm);
}

template <typename Derived>
double fuzzy_to_dense(const Eigen::SparseMatrixBase<Derived>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& c, double c_sum) {
    // sum(max(a,c)) == sum(c) + sum over supp(a) of (max(a_i,c_i) - c_i);
    // every correction term is >= 0, so the running sum stays monotone.
    double min_sum = 0.0, max_sum = c_sum;
    for (Eigen::InnerIterator<Derived> it(a.derived(), 0); it; ++it) {
        const double ci = c[it.index()];
        min_sum += std::fmin(it.value(), ci);
        max_sum += std::fmax(it.value(), ci) - ci;
    }
    if (max_sum == 0.0)
        throw std::runtime_error("fuzzy_to_dense: both vectors empty");
    return min_sum / max_sum;
}

template <typename Derived>
double similarity_to_dense(MeasureKind kind, const Eigen::SparseMatrixBase<Derived>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& c, double c_norm,
                           double c_sum) {
    return kind == MeasureKind::Cosine ? cosine_to_dense(a, c, c_norm)
                                       : fuzzy_to_dense(a, c, c_sum);
}

}  // namespace textclust
