#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "supeuclid/data.hpp"
#include "supeuclid/error.hpp"

#include "test_util.hpp"

using namespace supeuclid;

namespace {

// Golden two-record CIFAR buffer with distinct byte patterns per record.
std::vector<std::uint8_t> golden_cifar_buffer() {
    std::vector<std::uint8_t> buf(2 * kCifarRecordBytes);
    buf[0] = 7;
    for (std::size_t j = 0; j < 3072; ++j) buf[1 + j] = static_cast<std::uint8_t>((j * 7 + 3) % 256);
    buf[kCifarRecordBytes] = 3;
    for (std::size_t j = 0; j < 3072; ++j)
        buf[kCifarRecordBytes + 1 + j] = static_cast<std::uint8_t>((j * 13 + 11) % 256);
    return buf;
}

}  // namespace

TEST_CASE("parse_cifar10_batch: saturated single record") {
    std::vector<std::uint8_t> buf(kCifarRecordBytes, 255);
    buf[0] = 7;
    const Dataset ds = parse_cifar10_batch(buf);
    CHECK(ds.size() == 1);
    CHECK(ds.k == 10);
    CHECK(ds.labels[0] == 7);
    CHECK(ds.X.minCoeff() == 1.0);
    CHECK(ds.X.maxCoeff() == 1.0);
}

TEST_CASE("parse_cifar10_batch: empty stream gives empty dataset with k=10") {
    const Dataset ds = parse_cifar10_batch({});
    CHECK(ds.size() == 0);
    CHECK(ds.k == 10);
}

TEST_CASE("parse_cifar10_batch: golden 6146-byte buffer, byte-by-byte") {
    const auto buf = golden_cifar_buffer();
    REQUIRE(buf.size() == 6146);
    const Dataset ds = parse_cifar10_batch(buf);
    REQUIRE(ds.size() == 2);
    CHECK(ds.labels[0] == 7);
    CHECK(ds.labels[1] == 3);
    for (Index j = 0; j < kCifarDim; ++j) {
        CHECK(ds.X(0, j) == static_cast<double>((j * 7 + 3) % 256) / 255.0);
        CHECK(ds.X(1, j) == static_cast<double>((j * 13 + 11) % 256) / 255.0);
    }
    // Order preserved, and the round trip is byte-identical.
    CHECK(serialize_cifar10(ds) == buf);
}

TEST_CASE("parse_cifar10_batch: format errors") {
    CHECK_THROWS_AS(parse_cifar10_batch(std::vector<std::uint8_t>(100)), FormatError);
    std::vector<std::uint8_t> bad(kCifarRecordBytes, 0);
    bad[0] = 10;
    CHECK_THROWS_AS(parse_cifar10_batch(bad), FormatError);
}

TEST_CASE("cifar round trip on random pixel data") {
    Rng rng(33);
    std::vector<std::uint8_t> buf(5 * kCifarRecordBytes);
    for (auto& b : buf) b = static_cast<std::uint8_t>(rng.bounded(256));
    for (int i = 0; i < 5; ++i) buf[static_cast<std::size_t>(i) * kCifarRecordBytes] = static_cast<std::uint8_t>(rng.bounded(10));
    CHECK(serialize_cifar10(parse_cifar10_batch(buf)) == buf);
}

TEST_CASE("gen_gaussian_mixture: determinism, shapes and split bookkeeping") {
    Rng r1(55), r2(55);
    const MixtureSplits a = gen_gaussian_mixture(4, 8, 50, 6.0, 30.0, 40, r1);
    const MixtureSplits b = gen_gaussian_mixture(4, 8, 50, 6.0, 30.0, 40, r2);
    CHECK(a.train.X == b.train.X);
    CHECK(a.id_test.X == b.id_test.X);
    CHECK(a.ood_test.X == b.ood_test.X);
    CHECK(a.train.labels == b.train.labels);

    CHECK(a.train.size() == 4 * 40);
    CHECK(a.id_test.size() == 4 * 10);
    CHECK(a.ood_test.size() == 40);
    CHECK(a.train.split == Split::train);
    CHECK(a.id_test.split == Split::id_test);
    CHECK(a.ood_test.split == Split::ood_test);
    for (const int y : a.ood_test.labels) CHECK(y == kOodLabel);

    // Disjoint 80/20 split covering all ID samples: per class 40 + 10 = 50.
    for (int c = 0; c < 4; ++c) {
        const auto count = [&](const Dataset& ds) {
            Index n = 0;
            for (const int y : ds.labels)
                if (y == c) ++n;
            return n;
        };
        CHECK(count(a.train) == 40);
        CHECK(count(a.id_test) == 10);
    }
}

TEST_CASE("gen_gaussian_mixture: class-0 sample mean concentrates at its center") {
    Rng rng(42);
    const MixtureSplits m = gen_gaussian_mixture(4, 8, 500, 6.0, 30.0, 100, rng);
    Vector mean = Vector::Zero(8);
    Index n = 0;
    const auto accumulate = [&](const Dataset& ds) {
        for (Index i = 0; i < ds.size(); ++i)
            if (ds.labels[static_cast<std::size_t>(i)] == 0) {
                mean += ds.X.row(i).transpose();
                ++n;
            }
    };
    accumulate(m.train);
    accumulate(m.id_test);
    CHECK(n == 500);
    mean /= static_cast<double>(n);
    const Vector center = 6.0 * mixture_direction(0, 8);
    CHECK((mean - center).norm() < 0.2);
}

TEST_CASE("gen_gaussian_mixture: ood_offset=0 centers the OoD cluster at the ID centroid") {
    Rng rng(9);
    const MixtureSplits m = gen_gaussian_mixture(4, 8, 500, 6.0, 0.0, 2000, rng);
    Vector centroid = Vector::Zero(8);
    for (int c = 0; c < 4; ++c) centroid += 6.0 * mixture_direction(c, 8);
    centroid /= 4.0;
    const Vector ood_mean = m.ood_test.X.colwise().mean().transpose();
    CHECK((ood_mean - centroid).norm() < 0.15);
}

TEST_CASE("gen_gaussian_mixture: OoD center distance equals ood_offset") {
    Rng rng(10);
    const double offset = 30.0;
    const MixtureSplits m = gen_gaussian_mixture(4, 8, 500, 6.0, offset, 2000, rng);
    Vector centroid = Vector::Zero(8);
    for (int c = 0; c < 4; ++c) centroid += 6.0 * mixture_direction(c, 8);
    centroid /= 4.0;
    const Vector ood_mean = m.ood_test.X.colwise().mean().transpose();
    CHECK((ood_mean - centroid).norm() == doctest::Approx(offset).epsilon(0.01));
}

TEST_CASE("gen_gaussian_mixture: argument validation") {
    Rng rng(1);
    CHECK_THROWS_AS(gen_gaussian_mixture(1, 8, 50, 6.0, 30.0, 10, rng), ContractError);
    CHECK_THROWS_AS(gen_gaussian_mixture(4, 8, 4, 6.0, 30.0, 10, rng), InsufficientDataError);
    CHECK_THROWS_AS(gen_gaussian_mixture(4, 8, 50, 0.0, 30.0, 10, rng), ContractError);
}

TEST_CASE("mixture_direction: deterministic unit vectors, axes first") {
    const Vector e2 = mixture_direction(2, 8);
    CHECK(e2(2) == 1.0);
    CHECK(e2.norm() == 1.0);
    const Vector u9 = mixture_direction(9, 8);   // beyond the axis range
    const Vector u9b = mixture_direction(9, 8);
    CHECK((u9 - u9b).norm() == 0.0);
    CHECK(std::abs(u9.norm() - 1.0) <= 1e-12);
}

TEST_CASE("make_views: zero noise reproduces the sample exactly") {
    Rng rng(3);
    LabeledSample s{Vector::LinSpaced(8, -1.0, 2.5), 1};
    AugmentConfig cfg;
    cfg.mode = AugmentMode::gaussian_noise;
    cfg.noise_sigma = 0.0;
    const auto [a, b] = make_views(s, cfg, rng);
    CHECK((a - s.x).norm() == 0.0);
    CHECK((b - s.x).norm() == 0.0);
}

TEST_CASE("make_views: noise displacement matches its chi-square expectation") {
    Rng rng(12);
    LabeledSample s{Vector::Zero(8), 0};
    AugmentConfig cfg;
    cfg.mode = AugmentMode::gaussian_noise;
    cfg.noise_sigma = 0.1;
    double total = 0.0;
    const int reps = 5000;  // two views per rep -> 1e4 draws
    for (int i = 0; i < reps; ++i) {
        const auto [a, b] = make_views(s, cfg, rng);
        total += (a - s.x).squaredNorm();
        total += (b - s.x).squaredNorm();
    }
    const double mean = total / (2.0 * reps);
    CHECK(mean == doctest::Approx(0.08).epsilon(0.10));  // E = d * sigma^2 = 8 * 0.01
}

TEST_CASE("hflip32 is an involution; flip twice with the same crop restores it") {
    Rng rng(4);
    Vector img(kCifarDim);
    for (Index i = 0; i < img.size(); ++i) img(i) = rng.uniform();
    const Vector crop = crop32(img, 4, 3, 6);
    CHECK((hflip32(hflip32(crop)) - crop).norm() == 0.0);
}

TEST_CASE("crop32: zero offset with zero pad is the identity") {
    Rng rng(8);
    Vector img(kCifarDim);
    for (Index i = 0; i < img.size(); ++i) img(i) = rng.uniform();
    CHECK((crop32(img, 0, 0, 0) - img).norm() == 0.0);
}

TEST_CASE("make_views: crop_flip on a non-image vector is a mode error") {
    Rng rng(5);
    LabeledSample s{Vector::Zero(8), 0};
    AugmentConfig cfg;
    cfg.mode = AugmentMode::crop_flip;
    CHECK_THROWS_AS(make_views(s, cfg, rng), ModeError);
}

TEST_CASE("make_views: crop_flip views keep the image shape") {
    Rng rng(6);
    Vector img(kCifarDim);
    for (Index i = 0; i < img.size(); ++i) img(i) = rng.uniform();
    LabeledSample s{img, 2};
    AugmentConfig cfg;
    cfg.mode = AugmentMode::crop_flip;
    const auto [a, b] = make_views(s, cfg, rng);
    CHECK(a.size() == kCifarDim);
    CHECK(b.size() == kCifarDim);
}

namespace {

Dataset tiny_dataset(Index n, int k) {
    Dataset ds;
    ds.X = Matrix::Zero(n, 2);
    ds.labels.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) ds.labels[static_cast<std::size_t>(i)] = static_cast<int>(i % k);
    ds.k = k;
    return ds;
}

}  // namespace

TEST_CASE("make_batches: one full batch is a permutation of all indices") {
    Rng rng(2);
    const auto batches = make_batches(tiny_dataset(10, 2), 10, rng);
    REQUIRE(batches.size() == 1);
    std::set<Index> seen(batches[0].begin(), batches[0].end());
    CHECK(seen.size() == 10);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 9);
}

TEST_CASE("make_batches: remainder handling and the drop rule") {
    Rng rng(2);
    const auto batches = make_batches(tiny_dataset(10, 2), 3, rng);
    // 3+3+3 plus a singleton remainder, dropped for having < 2 samples.
    REQUIRE(batches.size() == 3);
    for (const auto& b : batches) CHECK(b.size() == 3);

    // A 2-sample remainder survives only with two distinct classes.
    Rng rng2(31);
    const auto batches2 = make_batches(tiny_dataset(8, 2), 3, rng2);
    const bool tail_kept = batches2.size() == 3;
    if (tail_kept) {
        CHECK(batches2.back().size() == 2);
        std::set<int> classes;
        for (const Index i : batches2.back()) classes.insert(static_cast<int>(i % 2));
        CHECK(classes.size() == 2);
    } else {
        CHECK(batches2.size() == 2);
    }
}

TEST_CASE("make_batches: single-class short remainder is dropped") {
    // All labels equal: any short tail has one distinct class and must go.
    Dataset ds = tiny_dataset(7, 1);
    ds.k = 1;
    Rng rng(3);
    const auto batches = make_batches(ds, 5, rng);
    REQUIRE(batches.size() == 1);
    CHECK(batches[0].size() == 5);
}

TEST_CASE("make_batches: deterministic for a fixed seed") {
    Rng a(99), b(99);
    const auto ba = make_batches(tiny_dataset(23, 3), 4, a);
    const auto bb = make_batches(tiny_dataset(23, 3), 4, b);
    CHECK(ba == bb);
}

TEST_CASE("make_batches: batch_size below 2 is a contract violation") {
    Rng rng(1);
    const Dataset ds = tiny_dataset(4, 2);
    CHECK_THROWS_AS(make_batches(ds, 1, rng), ContractError);
}
