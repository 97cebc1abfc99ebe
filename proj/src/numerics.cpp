#include "supeuclid/numerics.hpp"

namespace supeuclid {

Matrix pairwise_sq_dist(const Matrix& A, const Matrix& B) {
    if (A.cols() != B.cols())
        throw DimensionError("pairwise_sq_dist: dimension mismatch (" +
                             std::to_string(A.cols()) + " vs " +
                             std::to_string(B.cols()) + ")");
    Matrix out(A.rows(), B.rows());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < B.rows(); ++j)
            out(i, j) = (A.row(i) - B.row(j)).squaredNorm();
    return out;
}

}  // namespace supeuclid
