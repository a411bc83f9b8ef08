#include "support.hpp"

#include "lrsc/clustering.hpp"
#include "lrsc/datagen.hpp"
#include "lrsc/errors.hpp"
#include "lrsc/prox.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace lrsc;
using lrsc::test::diag;
using lrsc::test::mat;
using lrsc::test::max_abs;

namespace {

// Two orthogonal lines in R^3, four points each.
Matrix two_lines(oracle::Rng &rng) {
    Matrix x(3, 8);
    std::normal_distribution<double> n(0.0, 1.0);
    for (Index j = 0; j < 8; ++j) {
        const double t = n(rng) + (n(rng) > 0 ? 1.0 : -1.0);
        x.col(j)       = j < 4 ? Vector::Unit(3, 0) * t : Vector((Vector(3) << 0, 1, 1).finished() * t);
    }
    return x;
}

double cross_block(const Matrix &z, const Labels &truth) {
    double worst = 0.0;
    for (Index i = 0; i < z.rows(); ++i)
        for (Index j = 0; j < z.cols(); ++j)
            if (truth[i] != truth[j])
                worst = std::max(worst, std::abs(z(i, j)));
    return worst;
}

Dataset clean_data(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.num_subspaces = 3;
    cfg.subspace_dim  = 3;
    cfg.ambient_dim   = 20;
    cfg.points_per    = 12;
    cfg.seed          = seed;
    return generate(cfg);
}

} // namespace

TEST_SUITE("clustering") {

TEST_CASE("method names round trip") {
    for (Method m : {Method::Sim, Method::Dssim, Method::Cssim, Method::Ssim})
        CHECK(parse_method(method_name(m)) == m);
    CHECK_THROWS_AS(parse_method("lrr"), ConfigError);
}

TEST_CASE("shape interaction matrix") {
    oracle::Rng rng(1);
    const Matrix q = oracle::random_orthonormal(6, 4, rng).transpose();
    CHECK(max_abs(sim(q) - q.transpose() * q) <= 1e-12);
    CHECK(max_abs(sim(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)) <= 1e-12);

    Matrix one(3, 1);
    one << 1, 2, 3;
    CHECK(sim(one)(0, 0) == doctest::Approx(1));

    const Matrix x = two_lines(rng);
    const Labels truth{0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(cross_block(sim(x), truth) <= 1e-10);
}

TEST_CASE("rank-truncated shape interaction matrix") {
    const Matrix x = diag({3, 1});
    SUBCASE("hand enumeration") {
        const DssimResult d = dssim(x, 2.0);
        CHECK(d.r == 1);
        CHECK(max_abs(d.z - diag({1, 0})) <= 1e-12);
    }
    SUBCASE("small weight keeps everything") {
        const DssimResult d = dssim(x, 0.5);
        CHECK(d.r == 2);
        CHECK(max_abs(d.z - sim(x)) <= 1e-12);
    }
    SUBCASE("large weight drops everything") {
        const DssimResult d = dssim(x, 4.0);
        CHECK(d.r == 0);
        CHECK(d.z.isZero());
    }
    SUBCASE("fixed rank") {
        CHECK(max_abs(dssim_fixed_rank(x, 1) - diag({1, 0})) <= 1e-12);
        CHECK(max_abs(dssim_fixed_rank(x, 7) - sim(x)) <= 1e-12);
        CHECK_THROWS_AS(dssim_fixed_rank(x, -1), InvalidInput);
    }
}

TEST_CASE("shrunk shape interaction matrices") {
    CHECK(max_abs(cssim(diag({2, 2}), 2.0) - 0.75 * Matrix::Identity(2, 2)) <= 1e-12);
    CHECK(cssim(diag({2, 1}), 8.0).isZero());
    CHECK(max_abs(ssim(diag({1}), 1.0) - diag({0.5})) <= 1e-12);

    oracle::Rng rng(3);
    const Matrix x = oracle::gaussian(4, 7, rng);
    CHECK(max_abs(ssim(x, 0.0) - sim(x)) <= 1e-10);
    CHECK(max_abs(cssim(x, 1e-12) - sim(x)) <= 1e-8);
    CHECK_THROWS_AS(cssim(x, -1.0), InvalidInput);
}

TEST_CASE("ridge self-expression matches gradient descent") {
    oracle::Rng rng(5);
    const Matrix x      = oracle::gaussian(4, 6, rng);
    const double lambda = 0.5;
    auto f = [&](const Matrix &z) { return (x - x * z).squaredNorm() + lambda * z.squaredNorm(); };
    auto g = [&](const Matrix &z) { return Matrix(-2.0 * x.transpose() * (x - x * z) + 2.0 * lambda * z); };
    const Matrix z = oracle::gradient_descent(f, g, Matrix::Zero(6, 6));
    CHECK(max_abs(z - ssim(x, lambda)) <= 1e-5);
}

TEST_CASE("all reconstructions share the singular frame and live in the row space") {
    oracle::Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        const Matrix x = oracle::random_rank_k(6, 9, 4, rng);
        const std::vector<Matrix> zs{sim(x), dssim(x, 0.5).z, cssim(x, 0.7), ssim(x, 0.7),
                                     dssim_fixed_rank(x, 2)};
        const Matrix proj = pinv(x) * x;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            CHECK((zs[i] - proj * zs[i]).norm() <= 1e-8);
            for (std::size_t j = 0; j < zs.size(); ++j)
                CHECK((zs[i] * zs[j] - zs[j] * zs[i]).norm() <= 1e-8);
        }
        const SvdFactors f = thin_svd(x);
        for (double lambda : {0.01, 0.3, 3.0}) {
            const Vector ones = Vector::Ones(f.rank());
            const Vector c = vector_rule(NormSpec::squared_frobenius(), NormSpec::trace(), f.sigma,
                                         f.sigma, ones, lambda);
            const Vector s = vector_rule(NormSpec::squared_frobenius(), NormSpec::squared_frobenius(),
                                         f.sigma, f.sigma, ones, lambda);
            CHECK((c.array() >= 0).all());
            CHECK((c.array() <= 1).all());
            CHECK((s.array() >= 0).all());
            CHECK((s.array() <= 1).all());
        }
    }
}

TEST_CASE("block sparsity on clean independent subspaces") {
    const Dataset d = clean_data(3);
    for (Method m : {Method::Sim, Method::Dssim, Method::Cssim, Method::Ssim}) {
        // shrinkage reweights the singular frame, which mixes non-orthogonal
        // subspaces in proportion to lambda
        const Matrix z = reconstruction(thin_svd(d.points), m, 1e-9);
        CHECK(cross_block(z, *d.labels) <= 1e-8);
    }
}

TEST_CASE("affinity") {
    const Matrix z = mat(2, 2, {0, 1, 0, 0});
    CHECK(max_abs(affinity(z) - mat(2, 2, {0, 1, 1, 0})) == 0.0);
    oracle::Rng rng(9);
    const Matrix q   = oracle::gaussian(4, 4, rng);
    const Matrix psd = q * q.transpose();
    CHECK(max_abs(affinity(psd) - 2.0 * psd.cwiseAbs()) <= 1e-12);
    const Matrix w = affinity(oracle::gaussian(5, 5, rng));
    CHECK(max_abs(w - w.transpose()) <= 1e-12);
}

TEST_CASE("spectral clustering") {
    SUBCASE("exact blocks") {
        Matrix w = Matrix::Zero(7, 7);
        const Labels truth{0, 0, 1, 1, 1, 2, 2};
        for (Index i = 0; i < 7; ++i)
            for (Index j = 0; j < 7; ++j)
                if (truth[i] == truth[j] && i != j)
                    w(i, j) = 1.0;
        const SpectralResult r = spectral_cluster(w, 3, 1);
        CHECK(accuracy(r.labels, truth) == 1.0);
        CHECK_FALSE(r.degenerate);
    }
    SUBCASE("single cluster") {
        const SpectralResult r = spectral_cluster(Matrix::Ones(4, 4), 1, 0);
        CHECK(r.labels == Labels{0, 0, 0, 0});
    }
    SUBCASE("noisy blocks") {
        oracle::Rng rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Matrix w(10, 10);
        for (Index i = 0; i < 10; ++i)
            for (Index j = i; j < 10; ++j)
                w(i, j) = w(j, i) = (i < 5) == (j < 5) ? 1.0 : 1e-3 * u(rng);
        const Labels truth{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
        CHECK(accuracy(spectral_cluster(w, 2, 5).labels, truth) == 1.0);
    }
    SUBCASE("isolated node is flagged") {
        Matrix w = Matrix::Zero(5, 5);
        w.topLeftCorner(2, 2).setOnes();
        w.block(2, 2, 2, 2).setOnes();
        const SpectralResult r = spectral_cluster(w, 2, 0);
        CHECK(r.degenerate);
        CHECK(r.isolated == 1);
        CHECK(r.labels.size() == 5);
    }
    SUBCASE("bad arguments") {
        CHECK_THROWS_AS(spectral_cluster(Matrix::Ones(3, 3), 4, 0), InvalidInput);
        CHECK_THROWS_AS(spectral_cluster(Matrix::Ones(3, 3), 0, 0), InvalidInput);
        CHECK_THROWS_AS(spectral_cluster(Matrix::Ones(3, 2), 1, 0), InvalidInput);
    }
}

TEST_CASE("accuracy") {
    const Labels truth{0, 0, 1, 1, 2, 2};
    CHECK(accuracy(truth, truth) == 1.0);
    CHECK(accuracy(Labels{2, 2, 0, 0, 1, 1}, truth) == 1.0);
    CHECK(accuracy(Labels{0, 1, 1, 1}, Labels{0, 0, 1, 1}) == doctest::Approx(0.75));
    CHECK_THROWS_AS(accuracy(Labels{0}, truth), InvalidInput);

    oracle::Rng rng(13);
    std::uniform_int_distribution<int> lab(0, 3);
    for (int t = 0; t < 20; ++t) {
        Labels pred(12), tr(12);
        for (auto &v : pred)
            v = lab(rng);
        for (auto &v : tr)
            v = lab(rng);
        std::vector<int> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        Labels moved = pred;
        for (auto &v : moved)
            v = perm[v];
        CHECK(accuracy(moved, tr) == accuracy(pred, tr));
    }
}

TEST_CASE("pipeline") {
    const Dataset d = clean_data(5);
    SUBCASE("clean data is perfectly segmented") {
        for (Method m : {Method::Sim, Method::Dssim, Method::Cssim, Method::Ssim}) {
            const ClusterResult r = run_pipeline(d, m, 1e-3, 3, 0);
            REQUIRE(r.accuracy.has_value());
            CHECK(*r.accuracy == 1.0);
            CHECK(r.z.rows() == d.size());
            CHECK(r.affinity.rows() == d.size());
            CHECK(r.reconstruction_seconds >= 0.0);
        }
    }
    SUBCASE("huge weight zeroes the reconstruction and flags it") {
        const ClusterResult r = run_pipeline(d, Method::Cssim, 1e12, 3, 0);
        CHECK(r.z.isZero());
        CHECK(r.degenerate);
        CHECK(r.kept_rank == 0);
    }
    SUBCASE("deterministic") {
        Dataset noisy = d;
        oracle::Rng rng(2);
        noisy.points += 0.3 * oracle::gaussian(noisy.points.rows(), noisy.points.cols(), rng);
        const ClusterResult a = run_pipeline(noisy, Method::Ssim, 0.1, 3, 42);
        const ClusterResult b = run_pipeline(noisy, Method::Ssim, 0.1, 3, 42);
        CHECK(a.labels == b.labels);
        CHECK(max_abs(a.z - b.z) == 0.0);
    }
    SUBCASE("no labels means no accuracy") {
        Dataset bare = d;
        bare.labels.reset();
        CHECK_FALSE(run_pipeline(bare, Method::Sim, 0.0, 3, 0).accuracy.has_value());
    }
}

}
