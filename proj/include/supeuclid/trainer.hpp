#pragma once

#include <cstdint>
#include <vector>

#include "supeuclid/data.hpp"
#include "supeuclid/rng.hpp"
#include "supeuclid/types.hpp"

namespace supeuclid {

// Small encoder: input -> hidden (ReLU) -> feature -> linear projection,
// whose rowwise-normalized output feeds the contrastive loss.
struct EncoderParams {
    Matrix W1;  // d_in x h
    Vector b1;  // h
    Matrix W2;  // h x d_feat
    Vector b2;  // d_feat
    Matrix Wp;  // d_feat x d_proj

    Index d_in() const { return W1.rows(); }
    Index hidden() const { return W1.cols(); }
    Index d_feat() const { return W2.cols(); }
    Index d_proj() const { return Wp.cols(); }
};

struct TrainConfig {
    int epochs = 200;
    Index batch_size = 256;
    double lr0 = 0.5;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    double gamma = 0.1;  // cosine floor decay rate: min lr = lr0 * gamma^3
    double tau = 0.1;
    std::uint64_t seed = 42;
    ScoreSpace score_space = ScoreSpace::feature;
    // Architecture; input width comes from the dataset.
    Index hidden_dim = 64;
    Index feature_dim = 32;
    Index proj_dim = 16;
};

struct EpochRecord {
    int epoch = 0;
    double lr = 0.0;
    double mean_loss = 0.0;
};
using TrainLog = std::vector<EpochRecord>;

// Activations kept for the backward pass, stamped with a fingerprint of the
// parameters that produced them so a stale cache is detected.
struct ForwardCache {
    Matrix X;   // n x d_in input
    Matrix A1;  // pre-ReLU hidden activations
    Matrix H1;  // ReLU(A1)
    Matrix H;   // features (pre-projection)
    Matrix P;   // projection outputs before normalization
    std::vector<double> params_fingerprint;
};

struct ForwardResult {
    Matrix H;  // n x d_feat features
    Matrix Z;  // n x d_proj unit embeddings
    ForwardCache cache;
};

struct ParamGrads {
    Matrix W1;
    Vector b1;
    Matrix W2;
    Vector b2;
    Matrix Wp;
};

// Per-tensor momentum buffers, zero-initialized.
struct OptState {
    Matrix vW1;
    Vector vb1;
    Matrix vW2;
    Vector vb2;
    Matrix vWp;
};
OptState make_opt_state(const EncoderParams& p);

// Glorot-uniform weights, filled row-major W1 then W2 then Wp from the given
// stream; biases zero.
EncoderParams init_params(Index d_in, Index h, Index d_feat, Index d_proj, Rng& rng);

// H = relu(X*W1 + b1)*W2 + b2; Z = rowwise normalized H*Wp.
ForwardResult encoder_forward(const EncoderParams& p, const Matrix& X);

// Inference-only outputs: the feature space H or the projection space Z,
// without keeping activations around.
Matrix encode(const EncoderParams& p, const Matrix& X, ScoreSpace space);

// Reverse-mode gradients of whatever loss produced g_z (gradient w.r.t. Z).
// ReLU subgradient at exactly 0 is taken as 0.
ParamGrads encoder_backward(const EncoderParams& p, const ForwardCache& cache, const Matrix& g_z);

// Cosine-annealed learning rate, stepped per epoch:
//   lr(t) = lr_min + (lr0 - lr_min)/2 * (1 + cos(pi * t / epochs)),
// with lr_min = lr0 * gamma^3.
double cosine_lr(int t, const TrainConfig& cfg);
double min_lr(const TrainConfig& cfg);

// Classical momentum with coupled weight decay, applied to every tensor:
//   v <- momentum*v + (grad + weight_decay*param);  param <- param - lr*v.
void sgd_momentum_step(EncoderParams& p, const ParamGrads& g, OptState& state, double lr,
                       const TrainConfig& cfg);

// Full loop: per epoch, per batch -> two views -> forward -> loss/grad ->
// backward -> SGD step. Bit-deterministic for a fixed seed.
struct TrainResult {
    EncoderParams params;
    TrainLog log;
};
TrainResult train(const Dataset& ds, const TrainConfig& tc, const AugmentConfig& ac);

}  // namespace supeuclid
