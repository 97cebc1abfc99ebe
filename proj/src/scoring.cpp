#include "supeuclid/scoring.hpp"

#include <cmath>
#include <string>

#include "supeuclid/error.hpp"
#include "supeuclid/numerics.hpp"

namespace supeuclid {

PrototypeSet fit_prototypes(const Matrix& F, const std::vector<int>& labels, int k,
                            ScoreSpace space_tag) {
    if (static_cast<Index>(labels.size()) != F.rows())
        throw DimensionError("fit_prototypes: " + std::to_string(F.rows()) + " rows but " +
                             std::to_string(labels.size()) + " labels");
    if (k < 1) throw InputError("fit_prototypes: k must be >= 1");

    PrototypeSet protos;
    protos.space_tag = space_tag;
    protos.mu = Matrix::Zero(k, F.cols());
    protos.counts.assign(static_cast<std::size_t>(k), 0);

    for (Index i = 0; i < F.rows(); ++i) {
        const int y = labels[static_cast<std::size_t>(i)];
        if (y < 0 || y >= k)
            throw InputError("fit_prototypes: label " + std::to_string(y) + " at row " +
                             std::to_string(i) + " outside 0.." + std::to_string(k - 1));
        protos.mu.row(y) += F.row(i);
        ++protos.counts[static_cast<std::size_t>(y)];
    }
    for (int c = 0; c < k; ++c) {
        if (protos.counts[static_cast<std::size_t>(c)] == 0)
            throw EmptyClassError("fit_prototypes: class " + std::to_string(c) + " has no samples");
        protos.mu.row(c) /= static_cast<double>(protos.counts[static_cast<std::size_t>(c)]);
    }
    if (!protos.mu.allFinite()) throw NumericError("fit_prototypes: non-finite prototype");
    return protos;
}

ScoreVector score(const Matrix& F, const PrototypeSet& protos) {
    if (F.cols() != protos.mu.cols())
        throw DimensionError("score: feature dim mismatch (" + std::to_string(F.cols()) +
                             " vs " + std::to_string(protos.mu.cols()) + ")");
    const Matrix d2 = pairwise_sq_dist(F, protos.mu);
    ScoreVector out;
    out.scores.resize(F.rows());
    for (Index i = 0; i < F.rows(); ++i) out.scores(i) = std::sqrt(d2.row(i).minCoeff());
    if (!out.scores.allFinite()) throw NumericError("score: non-finite score");
    return out;
}

std::vector<int> predict_class(const Matrix& F, const PrototypeSet& protos) {
    if (F.cols() != protos.mu.cols())
        throw DimensionError("predict_class: feature dim mismatch (" + std::to_string(F.cols()) +
                             " vs " + std::to_string(protos.mu.cols()) + ")");
    const Matrix d2 = pairwise_sq_dist(F, protos.mu);
    std::vector<int> pred(static_cast<std::size_t>(F.rows()));
    for (Index i = 0; i < F.rows(); ++i) {
        int best = 0;
        for (Index c = 1; c < d2.cols(); ++c)
            if (d2(i, c) < d2(i, best)) best = static_cast<int>(c);  // ties keep the smaller index
        pred[static_cast<std::size_t>(i)] = best;
    }
    return pred;
}

}  // namespace supeuclid
