// Shared test-only oracles. Everything here is an independent route to the
// quantities the library computes: brute force, compensated summation or
// finite differences, never the implementation under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "supeuclid/rng.hpp"
#include "supeuclid/types.hpp"

namespace testutil {

using supeuclid::Index;
using supeuclid::Matrix;
using supeuclid::Rng;
using supeuclid::Vector;

// Kahan compensated summation oracle for inner products.
inline double kahan_dot(const Vector& a, const Vector& b) {
    double sum = 0.0, comp = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        const double term = a(i) * b(i) - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum;
}

// Naive triple-loop squared distances.
inline Matrix naive_pairwise_sq_dist(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows(), B.rows());
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < B.rows(); ++j) {
            double acc = 0.0;
            for (Index l = 0; l < A.cols(); ++l) {
                const double diff = A(i, l) - B(j, l);
                acc += diff * diff;
            }
            out(i, j) = acc;
        }
    }
    return out;
}

// Naive double-loop minimum Euclidean distances.
inline Vector naive_min_dist(const Matrix& F, const Matrix& mu) {
    Vector out(F.rows());
    for (Index i = 0; i < F.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < mu.rows(); ++c) {
            double acc = 0.0;
            for (Index l = 0; l < F.cols(); ++l) {
                const double diff = F(i, l) - mu(c, l);
                acc += diff * diff;
            }
            best = std::min(best, acc);
        }
        out(i) = std::sqrt(best);
    }
    return out;
}

// O(n^2) pairwise AUROC with half credit for ties; exact in doubles because
// every partial sum is a multiple of 0.5 far below 2^53.
inline double pairwise_auroc(const std::vector<double>& id, const std::vector<double>& ood) {
    double favorable = 0.0;
    for (const double o : ood) {
        for (const double i : id) {
            if (o > i) favorable += 1.0;
            else if (o == i) favorable += 0.5;
        }
    }
    return favorable / (static_cast<double>(id.size()) * static_cast<double>(ood.size()));
}

// Exhaustive threshold scan: candidates are every observed score, every
// midpoint of adjacent distinct observed scores, and sentinels below/above
// all data. Returns the FPR at the most permissive candidate that reaches
// the TPR target, plus the largest feasible *observed* candidate.
struct ScanResult {
    double fpr = 0.0;
    double best_candidate = 0.0;           // over the full candidate grid
    double best_observed = 0.0;            // restricted to observed scores
    bool has_observed = false;
};

inline ScanResult threshold_scan_oracle(const std::vector<double>& id,
                                        const std::vector<double>& ood, double tpr_target) {
    std::vector<double> observed(id);
    observed.insert(observed.end(), ood.begin(), ood.end());
    std::sort(observed.begin(), observed.end());

    std::vector<double> candidates = observed;
    for (std::size_t i = 0; i + 1 < observed.size(); ++i)
        if (observed[i] != observed[i + 1])
            candidates.push_back(0.5 * (observed[i] + observed[i + 1]));
    candidates.push_back(observed.front() - 1.0);
    candidates.push_back(observed.back() + 1.0);
    std::sort(candidates.begin(), candidates.end());

    const auto tpr = [&](double t) {
        std::size_t flagged = 0;
        for (const double o : ood)
            if (o > t) ++flagged;
        return static_cast<double>(flagged) / static_cast<double>(ood.size());
    };
    const auto fpr = [&](double t) {
        std::size_t flagged = 0;
        for (const double i : id)
            if (i > t) ++flagged;
        return static_cast<double>(flagged) / static_cast<double>(id.size());
    };

    ScanResult r;
    bool found = false;
    for (const double t : candidates) {
        if (tpr(t) >= tpr_target && (!found || t > r.best_candidate)) {
            r.best_candidate = t;
            found = true;
        }
    }
    r.fpr = fpr(r.best_candidate);
    for (const double t : observed) {
        if (tpr(t) >= tpr_target && (!r.has_observed || t > r.best_observed)) {
            r.best_observed = t;
            r.has_observed = true;
        }
    }
    return r;
}

// Central finite differences of f along every coordinate of x.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
    Vector g(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        Vector hi = x, lo = x;
        hi(i) += h;
        lo(i) -= h;
        g(i) = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

// Gradient-check error: worst entry disagreement normalized by the gradient
// scale (floored so an all-zero gradient does not divide by zero).
inline double grad_rel_error(const Vector& analytic, const Vector& numeric) {
    const double scale = std::max({analytic.cwiseAbs().maxCoeff(),
                                   numeric.cwiseAbs().maxCoeff(), 1e-3});
    return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

inline Matrix random_matrix(Index rows, Index cols, Rng& rng, double scale = 1.0) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
    return m;
}

// Random orthogonal matrix via Householder QR of a Gaussian matrix.
inline Matrix random_orthogonal(Index d, Rng& rng) {
    const Matrix g = random_matrix(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    return q;
}

// Unit rows for contrastive batches.
inline Matrix random_unit_rows(Index n, Index d, Rng& rng) {
    Matrix m = random_matrix(n, d, rng);
    for (Index i = 0; i < n; ++i) m.row(i) /= m.row(i).norm();
    return m;
}

// Fresh scratch directory under the build tree's temp space.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("supeuclid_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
