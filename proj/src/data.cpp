#include "supeuclid/data.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "supeuclid/error.hpp"
#include "supeuclid/numerics.hpp"

namespace supeuclid {

Dataset parse_cifar10_batch(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() % kCifarRecordBytes != 0)
        throw FormatError("parse_cifar10_batch: length " + std::to_string(bytes.size()) +
                          " is not a multiple of " + std::to_string(kCifarRecordBytes));
    const Index n = static_cast<Index>(bytes.size() / kCifarRecordBytes);

    Dataset ds;
    ds.k = kCifarClasses;
    ds.split = Split::train;
    ds.X.resize(n, kCifarDim);
    ds.labels.resize(static_cast<std::size_t>(n));

    for (Index i = 0; i < n; ++i) {
        const std::uint8_t* rec = bytes.data() + static_cast<std::size_t>(i) * kCifarRecordBytes;
        if (rec[0] > 9)
            throw FormatError("parse_cifar10_batch: record " + std::to_string(i) +
                              " has label byte " + std::to_string(rec[0]));
        ds.labels[static_cast<std::size_t>(i)] = rec[0];
        for (Index j = 0; j < kCifarDim; ++j)
            ds.X(i, j) = static_cast<double>(rec[1 + j]) / 255.0;
    }
    return ds;
}

std::vector<std::uint8_t> serialize_cifar10(const Dataset& ds) {
    if (ds.dim() != kCifarDim)
        throw DimensionError("serialize_cifar10: dimension mismatch (" +
                             std::to_string(ds.dim()) + " vs " + std::to_string(kCifarDim) + ")");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(ds.size()) * kCifarRecordBytes);
    for (Index i = 0; i < ds.size(); ++i) {
        const int y = ds.labels[static_cast<std::size_t>(i)];
        if (y < 0 || y > 9)
            throw FormatError("serialize_cifar10: record " + std::to_string(i) +
                              " has label " + std::to_string(y));
        std::uint8_t* rec = out.data() + static_cast<std::size_t>(i) * kCifarRecordBytes;
        rec[0] = static_cast<std::uint8_t>(y);
        for (Index j = 0; j < kCifarDim; ++j) {
            const long px = std::lround(ds.X(i, j) * 255.0);
            if (px < 0 || px > 255)
                throw FormatError("serialize_cifar10: pixel out of range at record " +
                                  std::to_string(i));
            rec[1 + j] = static_cast<std::uint8_t>(px);
        }
    }
    return out;
}

Vector mixture_direction(int c, Index d) {
    if (static_cast<Index>(c) < d) {
        Vector e = Vector::Zero(d);
        e(c) = 1.0;
        return e;
    }
    // Auxiliary fixed-seed stream; geometry depends only on (c, d).
    Rng aux(0x5EEDD1Ecull ^ (static_cast<std::uint64_t>(c) * 0x9E3779B97F4A7C15ull));
    for (;;) {
        Vector v(d);
        for (Index i = 0; i < d; ++i) v(i) = aux.normal();
        if (v.norm() > kNormEps) return l2_normalize(v);
    }
}

namespace {

Dataset make_split(Matrix X, std::vector<int> labels, int k, Split split) {
    Dataset ds;
    ds.X = std::move(X);
    ds.labels = std::move(labels);
    ds.k = k;
    ds.split = split;
    return ds;
}

}  // namespace

MixtureSplits gen_gaussian_mixture(int k, Index d_in, Index n_per_class,
                                   double class_sep, double ood_offset,
                                   Index n_ood, Rng& rng) {
    if (k < 2) throw ContractError("gen_gaussian_mixture: k must be >= 2");
    if (class_sep <= 0.0) throw ContractError("gen_gaussian_mixture: class_sep must be > 0");
    if (d_in < 1) throw ContractError("gen_gaussian_mixture: d_in must be >= 1");
    if (n_per_class < 5)
        throw InsufficientDataError("gen_gaussian_mixture: n_per_class " +
                                    std::to_string(n_per_class) + " < 5");
    if (n_ood < 1) throw InsufficientDataError("gen_gaussian_mixture: n_ood must be >= 1");

    Matrix centers(k, d_in);
    for (int c = 0; c < k; ++c)
        centers.row(c) = (class_sep * mixture_direction(c, d_in)).transpose();

    const Index n_train_c = n_per_class * 4 / 5;  // 80/20 in generation order
    const Index n_test_c = n_per_class - n_train_c;

    Matrix Xtr(n_train_c * k, d_in), Xte(n_test_c * k, d_in);
    std::vector<int> ytr(static_cast<std::size_t>(Xtr.rows()));
    std::vector<int> yte(static_cast<std::size_t>(Xte.rows()));

    for (int c = 0; c < k; ++c) {
        for (Index i = 0; i < n_per_class; ++i) {
            Vector noise(d_in);
            for (Index j = 0; j < d_in; ++j) noise(j) = rng.normal();
            const Vector x = centers.row(c).transpose() + noise;
            if (i < n_train_c) {
                const Index r = static_cast<Index>(c) * n_train_c + i;
                Xtr.row(r) = x.transpose();
                ytr[static_cast<std::size_t>(r)] = c;
            } else {
                const Index r = static_cast<Index>(c) * n_test_c + (i - n_train_c);
                Xte.row(r) = x.transpose();
                yte[static_cast<std::size_t>(r)] = c;
            }
        }
    }

    const Vector centroid = centers.colwise().mean().transpose();
    const Vector ood_center = centroid + ood_offset * mixture_direction(k, d_in);

    Matrix Xood(n_ood, d_in);
    std::vector<int> yood(static_cast<std::size_t>(n_ood), kOodLabel);
    for (Index i = 0; i < n_ood; ++i) {
        Vector noise(d_in);
        for (Index j = 0; j < d_in; ++j) noise(j) = rng.normal();
        Xood.row(i) = (ood_center + noise).transpose();
    }

    MixtureSplits out;
    out.train = make_split(std::move(Xtr), std::move(ytr), k, Split::train);
    out.id_test = make_split(std::move(Xte), std::move(yte), k, Split::id_test);
    out.ood_test = make_split(std::move(Xood), std::move(yood), k, Split::ood_test);
    return out;
}

Vector crop32(const Vector& img, int pad, int ox, int oy) {
    if (img.size() != kCifarDim)
        throw ModeError("crop32: expected a 3x32x32 plane-major vector");
    if (ox < 0 || oy < 0 || ox > 2 * pad || oy > 2 * pad)
        throw ContractError("crop32: crop origin out of range");
    const int side = kCifarImageSide;
    Vector out(kCifarDim);
    for (int p = 0; p < 3; ++p) {
        for (int r = 0; r < side; ++r) {
            for (int c = 0; c < side; ++c) {
                // Position in the padded image, mapped back to the source.
                const int sr = r + oy - pad;
                const int sc = c + ox - pad;
                double v = 0.0;
                if (sr >= 0 && sr < side && sc >= 0 && sc < side)
                    v = img(p * side * side + sr * side + sc);
                out(p * side * side + r * side + c) = v;
            }
        }
    }
    return out;
}

Vector hflip32(const Vector& img) {
    if (img.size() != kCifarDim)
        throw ModeError("hflip32: expected a 3x32x32 plane-major vector");
    const int side = kCifarImageSide;
    Vector out(kCifarDim);
    for (int p = 0; p < 3; ++p)
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c)
                out(p * side * side + r * side + c) = img(p * side * side + r * side + (side - 1 - c));
    return out;
}

namespace {

Vector one_view(const Vector& x, const AugmentConfig& cfg, Rng& rng) {
    switch (cfg.mode) {
        case AugmentMode::gaussian_noise: {
            Vector v(x.size());
            for (Index i = 0; i < x.size(); ++i) v(i) = x(i) + cfg.noise_sigma * rng.normal();
            return v;
        }
        case AugmentMode::crop_flip: {
            const int ox = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(2 * cfg.crop_pad + 1)));
            const int oy = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(2 * cfg.crop_pad + 1)));
            Vector v = crop32(x, cfg.crop_pad, ox, oy);
            if (rng.uniform() < cfg.flip_prob) v = hflip32(v);
            return v;
        }
    }
    throw ContractError("make_views: unknown augmentation mode");
}

}  // namespace

std::pair<Vector, Vector> make_views(const LabeledSample& s, const AugmentConfig& cfg, Rng& rng) {
    if (cfg.flip_prob < 0.0 || cfg.flip_prob > 1.0)
        throw ConfigError("make_views: flip_prob must be in [0, 1]");
    if (cfg.noise_sigma < 0.0)
        throw ConfigError("make_views: noise_sigma must be >= 0");
    if (cfg.mode == AugmentMode::crop_flip && s.x.size() != kCifarDim)
        throw ModeError("make_views: crop_flip requires image-shaped input (d=3072), got d=" +
                        std::to_string(s.x.size()));
    Vector a = one_view(s.x, cfg, rng);
    Vector b = one_view(s.x, cfg, rng);
    return {std::move(a), std::move(b)};
}

std::vector<std::vector<Index>> make_batches(const Dataset& ds, Index batch_size, Rng& rng) {
    if (batch_size < 2) throw ContractError("make_batches: batch_size must be >= 2");

    std::vector<Index> perm(static_cast<std::size_t>(ds.size()));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Index>(i);
    rng.shuffle(perm);

    std::vector<std::vector<Index>> batches;
    for (std::size_t start = 0; start < perm.size(); start += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(perm.size(), start + static_cast<std::size_t>(batch_size));
        batches.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                             perm.begin() + static_cast<std::ptrdiff_t>(end));
    }

    if (!batches.empty() && static_cast<Index>(batches.back().size()) < batch_size) {
        const auto& tail = batches.back();
        std::set<int> classes;
        for (Index idx : tail) classes.insert(ds.labels[static_cast<std::size_t>(idx)]);
        if (tail.size() < 2 || classes.size() < 2) batches.pop_back();
    }
    return batches;
}

}  // namespace supeuclid
