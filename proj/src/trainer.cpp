#include "supeuclid/trainer.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "supeuclid/error.hpp"
#include "supeuclid/numerics.hpp"
#include "supeuclid/scl.hpp"

namespace supeuclid {

namespace {

std::vector<double> fingerprint(const EncoderParams& p) {
    // First/last coefficient of every tensor plus the dimensions: cheap and
    // catches parameters that changed between forward and backward.
    return {static_cast<double>(p.d_in()),  static_cast<double>(p.hidden()),
            static_cast<double>(p.d_feat()), static_cast<double>(p.d_proj()),
            p.W1(0, 0), p.W1(p.W1.rows() - 1, p.W1.cols() - 1),
            p.b1(0),    p.b1(p.b1.size() - 1),
            p.W2(0, 0), p.W2(p.W2.rows() - 1, p.W2.cols() - 1),
            p.b2(0),    p.b2(p.b2.size() - 1),
            p.Wp(0, 0), p.Wp(p.Wp.rows() - 1, p.Wp.cols() - 1)};
}

void fill_glorot(Matrix& W, Rng& rng) {
    const double s = std::sqrt(6.0 / static_cast<double>(W.rows() + W.cols()));
    for (Index r = 0; r < W.rows(); ++r)
        for (Index c = 0; c < W.cols(); ++c) W(r, c) = rng.uniform(-s, s);
}

void validate_train_config(const TrainConfig& tc) {
    if (tc.epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (tc.batch_size < 2) throw ConfigError("train: batch_size must be >= 2");
    if (tc.lr0 <= 0.0) throw ConfigError("train: lr0 must be > 0");
    if (tc.momentum < 0.0 || tc.momentum >= 1.0) throw ConfigError("train: momentum must be in [0, 1)");
    if (tc.weight_decay < 0.0) throw ConfigError("train: weight_decay must be >= 0");
    if (tc.gamma <= 0.0 || tc.gamma > 1.0) throw ConfigError("train: gamma must be in (0, 1]");
    if (tc.tau <= 0.0) throw ConfigError("train: tau must be > 0");
    if (tc.hidden_dim < 1 || tc.feature_dim < 1 || tc.proj_dim < 1)
        throw ConfigError("train: architecture dims must be >= 1");
}

}  // namespace

OptState make_opt_state(const EncoderParams& p) {
    OptState s;
    s.vW1 = Matrix::Zero(p.W1.rows(), p.W1.cols());
    s.vb1 = Vector::Zero(p.b1.size());
    s.vW2 = Matrix::Zero(p.W2.rows(), p.W2.cols());
    s.vb2 = Vector::Zero(p.b2.size());
    s.vWp = Matrix::Zero(p.Wp.rows(), p.Wp.cols());
    return s;
}

EncoderParams init_params(Index d_in, Index h, Index d_feat, Index d_proj, Rng& rng) {
    if (d_in < 1 || h < 1 || d_feat < 1 || d_proj < 1)
        throw ContractError("init_params: all dims must be >= 1");
    EncoderParams p;
    p.W1.resize(d_in, h);
    p.b1 = Vector::Zero(h);
    p.W2.resize(h, d_feat);
    p.b2 = Vector::Zero(d_feat);
    p.Wp.resize(d_feat, d_proj);
    fill_glorot(p.W1, rng);
    fill_glorot(p.W2, rng);
    fill_glorot(p.Wp, rng);
    return p;
}

ForwardResult encoder_forward(const EncoderParams& p, const Matrix& X) {
    if (X.cols() != p.d_in())
        throw DimensionError("encoder_forward: input dim mismatch (" + std::to_string(X.cols()) +
                             " vs " + std::to_string(p.d_in()) + ")");

    ForwardCache cache;
    cache.X = X;
    cache.A1 = (X * p.W1).rowwise() + p.b1.transpose();
    cache.H1 = cache.A1.cwiseMax(0.0);
    cache.H = (cache.H1 * p.W2).rowwise() + p.b2.transpose();
    cache.P = cache.H * p.Wp;
    if (!cache.A1.allFinite() || !cache.H.allFinite() || !cache.P.allFinite())
        throw NumericError("encoder_forward: non-finite activation");
    cache.params_fingerprint = fingerprint(p);

    Matrix Z(X.rows(), p.d_proj());
    for (Index i = 0; i < Z.rows(); ++i)
        Z.row(i) = l2_normalize(cache.P.row(i)).transpose();

    ForwardResult out;
    out.H = cache.H;
    out.Z = std::move(Z);
    out.cache = std::move(cache);
    return out;
}

Matrix encode(const EncoderParams& p, const Matrix& X, ScoreSpace space) {
    if (X.cols() != p.d_in())
        throw DimensionError("encode: input dim mismatch (" + std::to_string(X.cols()) + " vs " +
                             std::to_string(p.d_in()) + ")");
    const Matrix A1 = (X * p.W1).rowwise() + p.b1.transpose();
    const Matrix H = (A1.cwiseMax(0.0) * p.W2).rowwise() + p.b2.transpose();
    if (!H.allFinite()) throw NumericError("encode: non-finite activation");
    if (space == ScoreSpace::feature) return H;
    const Matrix P = H * p.Wp;
    Matrix Z(P.rows(), P.cols());
    for (Index i = 0; i < P.rows(); ++i) Z.row(i) = l2_normalize(P.row(i)).transpose();
    return Z;
}

ParamGrads encoder_backward(const EncoderParams& p, const ForwardCache& cache, const Matrix& g_z) {
    if (cache.params_fingerprint != fingerprint(p))
        throw ContractError("encoder_backward: cache does not match params (stale cache)");
    if (g_z.rows() != cache.P.rows() || g_z.cols() != cache.P.cols())
        throw DimensionError("encoder_backward: g_z shape mismatch (" + std::to_string(g_z.rows()) +
                             "x" + std::to_string(g_z.cols()) + " vs " +
                             std::to_string(cache.P.rows()) + "x" + std::to_string(cache.P.cols()) + ")");

    Matrix gP(cache.P.rows(), cache.P.cols());
    for (Index i = 0; i < gP.rows(); ++i)
        gP.row(i) = backprop_normalize(cache.P.row(i), g_z.row(i)).transpose();

    ParamGrads g;
    g.Wp = cache.H.transpose() * gP;
    const Matrix gH = gP * p.Wp.transpose();
    g.W2 = cache.H1.transpose() * gH;
    g.b2 = gH.colwise().sum().transpose();
    const Matrix gH1 = gH * p.W2.transpose();
    // ReLU subgradient: 0 at exactly 0.
    const Matrix gA1 = (cache.A1.array() > 0.0).cast<double>() * gH1.array();
    g.W1 = cache.X.transpose() * gA1;
    g.b1 = gA1.colwise().sum().transpose();
    return g;
}

double min_lr(const TrainConfig& cfg) { return cfg.lr0 * cfg.gamma * cfg.gamma * cfg.gamma; }

double cosine_lr(int t, const TrainConfig& cfg) {
    if (t < 0 || t >= cfg.epochs)
        throw ContractError("cosine_lr: epoch index " + std::to_string(t) + " out of [0, " +
                            std::to_string(cfg.epochs) + ")");
    const double lo = min_lr(cfg);
    const double phase = M_PI * static_cast<double>(t) / static_cast<double>(cfg.epochs);
    return lo + 0.5 * (cfg.lr0 - lo) * (1.0 + std::cos(phase));
}

namespace {

void apply_step(Matrix& param, Matrix& velocity, const Matrix& grad, double lr,
                const TrainConfig& cfg) {
    velocity = cfg.momentum * velocity + (grad + cfg.weight_decay * param);
    param -= lr * velocity;
}

void apply_step(Vector& param, Vector& velocity, const Vector& grad, double lr,
                const TrainConfig& cfg) {
    velocity = cfg.momentum * velocity + (grad + cfg.weight_decay * param);
    param -= lr * velocity;
}

}  // namespace

void sgd_momentum_step(EncoderParams& p, const ParamGrads& g, OptState& state, double lr,
                       const TrainConfig& cfg) {
    apply_step(p.W1, state.vW1, g.W1, lr, cfg);
    apply_step(p.b1, state.vb1, g.b1, lr, cfg);
    apply_step(p.W2, state.vW2, g.W2, lr, cfg);
    apply_step(p.b2, state.vb2, g.b2, lr, cfg);
    apply_step(p.Wp, state.vWp, g.Wp, lr, cfg);
}

TrainResult train(const Dataset& ds, const TrainConfig& tc, const AugmentConfig& ac) {
    validate_train_config(tc);
    if (ds.split != Split::train) throw ContractError("train: dataset split must be 'train'");
    if (ds.k < 2) throw ContractError("train: need at least 2 classes");
    if (ds.size() < 2) throw InsufficientDataError("train: need at least 2 samples");

    Rng rng(tc.seed);
    EncoderParams params = init_params(ds.dim(), tc.hidden_dim, tc.feature_dim, tc.proj_dim, rng);
    OptState state = make_opt_state(params);
    const SclConfig scl_cfg{tc.tau};

    TrainLog log;
    log.reserve(static_cast<std::size_t>(tc.epochs));

    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        const double lr = cosine_lr(epoch, tc);
        const auto batches = make_batches(ds, tc.batch_size, rng);

        double loss_sum = 0.0;
        Index batch_count = 0;
        for (std::size_t b = 0; b < batches.size(); ++b) {
            const auto& batch = batches[b];
            const Index n = static_cast<Index>(batch.size());

            Matrix views(2 * n, ds.dim());
            std::vector<int> labels(static_cast<std::size_t>(2 * n));
            for (Index j = 0; j < n; ++j) {
                const LabeledSample s = ds.sample(batch[static_cast<std::size_t>(j)]);
                auto [va, vb] = make_views(s, ac, rng);
                views.row(j) = va.transpose();
                views.row(j + n) = vb.transpose();
                labels[static_cast<std::size_t>(j)] = s.y;
                labels[static_cast<std::size_t>(j + n)] = s.y;
            }

            try {
                ForwardResult fwd = encoder_forward(params, views);
                SclBatch sb{std::move(fwd.Z), std::move(labels)};
                const double loss = scl_loss(sb, scl_cfg);
                const Matrix g_z = scl_grad(sb, scl_cfg);
                const ParamGrads grads = encoder_backward(params, fwd.cache, g_z);
                sgd_momentum_step(params, grads, state, lr, tc);
                loss_sum += loss;
                ++batch_count;
            } catch (const EmptyPositivesError& e) {
                throw EmptyPositivesError("epoch " + std::to_string(epoch) + " batch " +
                                          std::to_string(b) + ": " + e.what());
            } catch (const NumericError& e) {
                throw NumericError("epoch " + std::to_string(epoch) + " batch " +
                                   std::to_string(b) + ": " + e.what());
            } catch (const DegenerateVectorError& e) {
                throw NumericError("epoch " + std::to_string(epoch) + " batch " +
                                   std::to_string(b) + ": " + e.what());
            }
        }
        if (batch_count == 0)
            throw InsufficientDataError("epoch " + std::to_string(epoch) +
                                        ": every batch was dropped");
        log.push_back({epoch, lr, loss_sum / static_cast<double>(batch_count)});
    }

    if (!params.W1.allFinite() || !params.b1.allFinite() || !params.W2.allFinite() ||
        !params.b2.allFinite() || !params.Wp.allFinite())
        throw NumericError("train: non-finite parameters after training");

    return {std::move(params), std::move(log)};
}

}  // namespace supeuclid
