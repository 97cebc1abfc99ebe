#pragma once

#include <Eigen/Dense>

namespace supeuclid {

// All internal arithmetic is double precision regardless of what the file
// formats store; row-major so matrices serialize without transposition.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Norms at or below this are treated as directionless noise.
inline constexpr double kNormEps = 1e-12;

// Which encoder output feeds prototype fitting and scoring.
enum class ScoreSpace { feature, projection };

}  // namespace supeuclid
