#include "supeuclid/scl.hpp"

#include <cmath>
#include <limits>

namespace supeuclid {

namespace {

void validate_batch(const SclBatch& b, const SclConfig& cfg) {
    if (cfg.tau <= 0.0) throw ContractError("scl: tau must be > 0");
    if (b.Z.rows() != static_cast<Index>(b.labels.size()))
        throw DimensionError("scl: Z has " + std::to_string(b.Z.rows()) + " rows but " +
                             std::to_string(b.labels.size()) + " labels");
    if (b.Z.rows() < 2) throw EmptyPositivesError("scl: batch has fewer than 2 rows");
    for (Index i = 0; i < b.Z.rows(); ++i) {
        const double n = b.Z.row(i).norm();
        if (std::abs(n - 1.0) > 1e-9)
            throw InvariantError("scl: row " + std::to_string(i) + " has norm " +
                                 std::to_string(n) + ", expected 1 within 1e-9");
    }
}

}  // namespace

namespace detail {

double scl_loss_core(const Matrix& Z, const std::vector<int>& labels, double tau) {
    const Index n = Z.rows();
    const Matrix logits = (Z * Z.transpose()) / tau;

    double total = 0.0;
    Index anchors = 0;
    for (Index i = 0; i < n; ++i) {
        Index pos_count = 0;
        for (Index j = 0; j < n; ++j)
            if (j != i && labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)])
                ++pos_count;
        if (pos_count == 0) continue;  // excluded from the anchor mean

        double max_logit = -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j)
            if (j != i) max_logit = std::max(max_logit, logits(i, j));

        double denom = 0.0;
        for (Index j = 0; j < n; ++j)
            if (j != i) denom += std::exp(logits(i, j) - max_logit);
        const double lse = max_logit + std::log(denom);

        double pos_sum = 0.0;
        for (Index j = 0; j < n; ++j)
            if (j != i && labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)])
                pos_sum += logits(i, j);

        total += lse - pos_sum / static_cast<double>(pos_count);
        ++anchors;
    }
    if (anchors == 0) throw EmptyPositivesError("scl_loss: no anchor has a positive");
    return total / static_cast<double>(anchors);
}

Matrix scl_grad_core(const Matrix& Z, const std::vector<int>& labels, double tau) {
    const Index n = Z.rows();
    const Matrix logits = (Z * Z.transpose()) / tau;

    // d(loss)/d(logits); row i covers anchor i's term, zero if it has no
    // positives. The candidate role of each row enters through the transpose.
    Matrix dl = Matrix::Zero(n, n);
    Index anchors = 0;
    for (Index i = 0; i < n; ++i) {
        Index pos_count = 0;
        for (Index j = 0; j < n; ++j)
            if (j != i && labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)])
                ++pos_count;
        if (pos_count == 0) continue;
        ++anchors;

        double max_logit = -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j)
            if (j != i) max_logit = std::max(max_logit, logits(i, j));
        double denom = 0.0;
        for (Index j = 0; j < n; ++j)
            if (j != i) denom += std::exp(logits(i, j) - max_logit);

        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double softmax = std::exp(logits(i, j) - max_logit) / denom;
            const bool positive =
                labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)];
            dl(i, j) = softmax - (positive ? 1.0 / static_cast<double>(pos_count) : 0.0);
        }
    }
    if (anchors == 0) throw EmptyPositivesError("scl_grad: no anchor has a positive");
    dl /= static_cast<double>(anchors);

    return (dl + dl.transpose()) * Z / tau;
}

}  // namespace detail

double scl_loss(const SclBatch& b, const SclConfig& cfg) {
    validate_batch(b, cfg);
    return detail::scl_loss_core(b.Z, b.labels, cfg.tau);
}

Matrix scl_grad(const SclBatch& b, const SclConfig& cfg) {
    validate_batch(b, cfg);
    Matrix g = detail::scl_grad_core(b.Z, b.labels, cfg.tau);
    if (!g.allFinite()) throw NumericError("scl_grad: non-finite gradient");
    return g;
}

}  // namespace supeuclid
