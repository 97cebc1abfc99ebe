#pragma once

#include <string>
#include <vector>

#include "supeuclid/error.hpp"
#include "supeuclid/numerics.hpp"
#include "supeuclid/types.hpp"

namespace supeuclid {

struct SclConfig {
    double tau = 0.1;  // temperature; logits are inner products / tau
};

// A two-view contrastive batch: 2N unit-norm rows laid out as
// [view_a of samples 0..N-1, view_b of samples 0..N-1], so rows i and i+N
// carry the same label.
struct SclBatch {
    Matrix Z;                // 2N x d, rows unit-norm within 1e-9
    std::vector<int> labels; // size 2N
};

// Supervised contrastive loss over the batch:
//   L = (1/|I|) sum_{i in I} (-1/|P(i)|) sum_{p in P(i)}
//         log[ exp(z_i.z_p / tau) / sum_{a != i} exp(z_i.z_a / tau) ]
// where P(i) are the same-label rows excluding i, and I the anchors with a
// non-empty P(i); anchors without positives are excluded from the averaging
// denominator. Per-anchor max-logit subtraction stabilizes the exponentials
// (mandatory: tau = 0.1 produces logits up to 10). Accumulation is sequential
// left-to-right, so the value is reproducible bit-for-bit.
double scl_loss(const SclBatch& b, const SclConfig& cfg);

// Analytic gradient of scl_loss with respect to every row of Z, accumulating
// each row's anchor role and its candidate role in other anchors' terms.
Matrix scl_grad(const SclBatch& b, const SclConfig& cfg);

// Chain rule through z = u/|u| for a loss consuming the unit vector z:
// returns (g_z - (g_z.z) z) / |u|, the tangent projection scaled by 1/|u|.
template <typename U, typename G>
Vector backprop_normalize(const Eigen::MatrixBase<U>& u, const Eigen::MatrixBase<G>& g_z) {
    if (u.size() != g_z.size())
        throw DimensionError("backprop_normalize: length mismatch (" +
                             std::to_string(u.size()) + " vs " +
                             std::to_string(g_z.size()) + ")");
    const double n = l2_norm(u);
    if (n <= kNormEps)
        throw DegenerateVectorError("backprop_normalize: input norm below threshold");
    Vector z(u.size()), g(u.size());
    for (Index i = 0; i < u.size(); ++i) {
        z(i) = detail::vec_at(u, i) / n;
        g(i) = detail::vec_at(g_z, i);
    }
    const double radial = dot(g, z);
    return (g - radial * z) / n;
}

namespace detail {

// Loss/gradient on raw rows with no unit-norm gate. The public operations
// call these after validation; finite-difference tests call them directly
// because coordinate perturbations leave the unit sphere.
double scl_loss_core(const Matrix& Z, const std::vector<int>& labels, double tau);
Matrix scl_grad_core(const Matrix& Z, const std::vector<int>& labels, double tau);

}  // namespace detail

}  // namespace supeuclid
