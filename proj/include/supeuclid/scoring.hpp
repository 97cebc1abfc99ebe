#pragma once

#include <cstdint>
#include <vector>

#include "supeuclid/types.hpp"

namespace supeuclid {

struct PrototypeSet {
    Matrix mu;                        // k x d class means
    std::vector<std::int64_t> counts; // samples behind each mean, all >= 1
    ScoreSpace space_tag = ScoreSpace::feature;
};

// Higher score = more likely out-of-distribution. All entries finite, >= 0.
struct ScoreVector {
    Vector scores;
};

// mu[c] = arithmetic mean of the rows labeled c. Every class in 0..k-1 must
// occur at least once.
PrototypeSet fit_prototypes(const Matrix& F, const std::vector<int>& labels, int k,
                            ScoreSpace space_tag = ScoreSpace::feature);

// scores[i] = min_c |F_i - mu_c|  (Euclidean, not squared).
ScoreVector score(const Matrix& F, const PrototypeSet& protos);

// argmin_c of the distance; ties break toward the smaller class index.
std::vector<int> predict_class(const Matrix& F, const PrototypeSet& protos);

}  // namespace supeuclid
