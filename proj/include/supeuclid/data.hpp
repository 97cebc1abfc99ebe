#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "supeuclid/rng.hpp"
#include "supeuclid/types.hpp"

namespace supeuclid {

enum class Split { train, id_test, ood_test };

// Sentinel label for out-of-distribution samples; any attempt to train on it
// fails loudly instead of silently learning a bogus class.
inline constexpr int kOodLabel = -1;

struct LabeledSample {
    Vector x;
    int y = 0;
};

struct Dataset {
    Matrix X;                // n x d_in
    std::vector<int> labels; // kOodLabel for OoD samples
    int k = 0;               // number of in-distribution classes
    Split split = Split::train;

    Index size() const { return X.rows(); }
    Index dim() const { return X.cols(); }
    LabeledSample sample(Index i) const { return {X.row(i).transpose(), labels[static_cast<std::size_t>(i)]}; }
};

enum class AugmentMode { gaussian_noise, crop_flip };

struct AugmentConfig {
    AugmentMode mode = AugmentMode::gaussian_noise;
    double noise_sigma = 0.5; // gaussian_noise: stddev of additive i.i.d. noise
    int crop_pad = 4;         // crop_flip: zero padding before the random crop
    double flip_prob = 0.5;   // crop_flip: probability of a horizontal flip
};

// --------------------------------------------------------------------------
// CIFAR-10 binary batch format: records of exactly 3073 bytes, byte 0 the
// label in {0..9}, bytes 1..3072 the R, G, B planes of a 32x32 image.
// Pixels map to value/255; no further normalization happens at parse time.
// --------------------------------------------------------------------------
inline constexpr std::size_t kCifarRecordBytes = 3073;
inline constexpr int kCifarImageSide = 32;
inline constexpr Index kCifarDim = 3072;
inline constexpr int kCifarClasses = 10;

Dataset parse_cifar10_batch(const std::vector<std::uint8_t>& bytes);

// Inverse of parse_cifar10_batch; parse-then-serialize is byte-identical.
std::vector<std::uint8_t> serialize_cifar10(const Dataset& ds);

// --------------------------------------------------------------------------
// Synthetic Gaussian mixture: class c sits at class_sep * u_c for fixed unit
// directions u_c (coordinate axes while c < d_in, otherwise unit vectors from
// an auxiliary fixed-seed stream), with unit-variance isotropic noise. The
// OoD cluster sits at distance ood_offset from the centroid of the class
// centers along the next direction in the same family. Each class splits
// 80/20 into train/id_test in generation order.
// --------------------------------------------------------------------------
struct MixtureSplits {
    Dataset train;
    Dataset id_test;
    Dataset ood_test;
};

MixtureSplits gen_gaussian_mixture(int k, Index d_in, Index n_per_class,
                                   double class_sep, double ood_offset,
                                   Index n_ood, Rng& rng);

// Deterministic unit direction used by the mixture generator (exposed for
// tests); depends only on (c, d), never on the data RNG.
Vector mixture_direction(int c, Index d);

// --------------------------------------------------------------------------
// Two stochastic views of one sample, sharing its label. gaussian_noise adds
// i.i.d. N(0, sigma^2) per coordinate; crop_flip pads each 32x32 plane by
// crop_pad zeros, takes a random 32x32 crop and flips horizontally with
// flip_prob. crop_flip requires the CIFAR plane-major layout (d = 3072).
// --------------------------------------------------------------------------
std::pair<Vector, Vector> make_views(const LabeledSample& s, const AugmentConfig& cfg, Rng& rng);

// Crop/flip primitives on plane-major 3x32x32 pixel vectors.
// crop32: reads the source as if zero-padded by `pad`, crop origin (ox, oy)
// with 0 <= ox, oy <= 2*pad. hflip32 mirrors every row and is an involution.
Vector crop32(const Vector& img, int pad, int ox, int oy);
Vector hflip32(const Vector& img);

// Seeded permutation of 0..n-1 cut into consecutive batches. A final short
// batch is dropped when it has fewer than 2 samples or only one distinct
// class; contrastive anchors would have no positives there.
std::vector<std::vector<Index>> make_batches(const Dataset& ds, Index batch_size, Rng& rng);

}  // namespace supeuclid
