#pragma once

#include <cmath>
#include <string>

#include "supeuclid/error.hpp"
#include "supeuclid/types.hpp"

namespace supeuclid {

namespace detail {

template <typename Derived>
bool is_vector_shaped(const Eigen::MatrixBase<Derived>& v) {
    return v.rows() == 1 || v.cols() == 1;
}

// Linear element access that works for both row and column expressions.
template <typename Derived>
double vec_at(const Eigen::MatrixBase<Derived>& v, Index i) {
    return v.rows() == 1 ? static_cast<double>(v.coeff(0, i))
                         : static_cast<double>(v.coeff(i, 0));
}

}  // namespace detail

// Inner product accumulated left-to-right in doubles.
template <typename A, typename B>
double dot(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    if (!detail::is_vector_shaped(a) || !detail::is_vector_shaped(b))
        throw DimensionError("dot: arguments must be vector-shaped");
    if (a.size() != b.size())
        throw DimensionError("dot: length mismatch (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    double acc = 0.0;
    for (Index i = 0; i < a.size(); ++i)
        acc += detail::vec_at(a, i) * detail::vec_at(b, i);
    return acc;
}

template <typename Derived>
double l2_norm(const Eigen::MatrixBase<Derived>& v) {
    if (!detail::is_vector_shaped(v))
        throw DimensionError("l2_norm: argument must be vector-shaped");
    double acc = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
        const double x = detail::vec_at(v, i);
        acc += x * x;
    }
    return std::sqrt(acc);
}

// Scales v to unit norm. Inputs with norm <= kNormEps carry no usable
// direction and are rejected.
template <typename Derived>
Vector l2_normalize(const Eigen::MatrixBase<Derived>& v) {
    const double n = l2_norm(v);
    if (n <= kNormEps)
        throw DegenerateVectorError("l2_normalize: norm " + std::to_string(n) +
                                    " is below " + std::to_string(kNormEps));
    Vector out(v.size());
    for (Index i = 0; i < v.size(); ++i) out(i) = detail::vec_at(v, i) / n;
    return out;
}

// Squared Euclidean distances between all row pairs: out(i,j) = |A_i - B_j|^2.
// Computed by explicit subtraction rather than the norm-expansion identity,
// which cancels catastrophically for near-duplicate rows.
Matrix pairwise_sq_dist(const Matrix& A, const Matrix& B);

}  // namespace supeuclid
