#include "support.hpp"

#include "lrsc/errors.hpp"
#include "lrsc/norms.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace lrsc;
using lrsc::test::diag;
using lrsc::test::mat;

namespace {

std::vector<NormSpec> kp_panel() {
    const double inf = std::numeric_limits<double>::infinity();
    return {NormSpec::trace(),
            NormSpec::frobenius(),
            NormSpec::spectral(),
            NormSpec::ky_fan(2),
            NormSpec::kp(std::nullopt, 3.0),
            NormSpec::kp(2, 2.0),
            NormSpec::kp(3, 1.5),
            NormSpec::kp(std::nullopt, inf)};
}

} // namespace

TEST_SUITE("norms") {

TEST_CASE("evaluate on small diagonals") {
    CHECK(evaluate(NormSpec::trace(), diag({1, 2})) == doctest::Approx(3));
    CHECK(evaluate(NormSpec::spectral(), diag({1, 2})) == doctest::Approx(2));
    CHECK(evaluate(NormSpec::frobenius(), diag({3, 4})) == doctest::Approx(5));
    CHECK(evaluate(NormSpec::squared_frobenius(), diag({3, 4})) == doctest::Approx(25));
    CHECK(evaluate(NormSpec::rank(), diag({3, 4, 0})) == 2);
    CHECK(evaluate(NormSpec::ky_fan(2), diag({1, 5, 3})) == doctest::Approx(8));
    CHECK(evaluate(NormSpec::ky_fan(10), diag({1, 5, 3})) == doctest::Approx(9));
    for (const auto &s : kp_panel())
        CHECK(evaluate(s, Matrix(Matrix::Zero(3, 2))) == 0.0);
    CHECK(evaluate(NormSpec::rank(), Matrix(Matrix::Zero(3, 2))) == 0.0);
}

TEST_CASE("residual norms of the non-SB counterexample") {
    const Matrix a = mat(2, 2, {1, 1, 1, 2});
    Matrix r1 = a;
    r1(0, 0) -= 1.0;
    CHECK(evaluate(NormSpec::trace(), r1) == doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(evaluate(NormSpec::frobenius(), r1) == doctest::Approx(std::sqrt(6.0)));
    Matrix r05 = a;
    r05(0, 0) -= 0.5;
    CHECK(evaluate(NormSpec::trace(), r05) == doctest::Approx(2.5));
}

TEST_CASE("parse and print round trip") {
    for (const char *text : {"rank", "fro", "fro2", "trace", "spec", "kp:k=2,p=1", "kp:k=full,p=3",
                             "kp:k=3,p=inf", "kp:k=full,p=1.5"}) {
        const NormSpec s = NormSpec::parse(text);
        CHECK(NormSpec::parse(s.to_string()) == s);
    }
    CHECK(NormSpec::parse("trace").is_trace());
    CHECK(NormSpec::parse("kp:k=full,p=2").is_frobenius());
    CHECK(NormSpec::parse("kp:k=1,p=inf").is_spectral());
    CHECK(NormSpec::parse("kp:k=full,p=inf").is_spectral());
    CHECK(NormSpec::parse("kp:k=1,p=1").is_spectral());
}

TEST_CASE("invalid specs are configuration errors") {
    for (const char *text : {"", "nuclear", "kp:k=0,p=1", "kp:k=2,p=0.5", "kp:k=2", "kp:p=2",
                             "kp:k=x,p=1", "kp:k=2,p=1,q=3"})
        CHECK_THROWS_AS(NormSpec::parse(text), ConfigError);
    CHECK_THROWS_AS(NormSpec::kp(0, 1.0), ConfigError);
    CHECK_THROWS_AS(NormSpec::kp(std::nullopt, 0.9), ConfigError);
}

TEST_CASE("ky fan dominance") {
    CHECK(ky_fan_dominates(diag({1, 1}), diag({2, 1})));
    CHECK_FALSE(ky_fan_dominates(diag({3, 0}), diag({2, 2})));
    CHECK(ky_fan_dominates(SingularProfile{Vector::Constant(1, 1.0)},
                           SingularProfile{Vector::Constant(3, 1.0)}));
    CHECK_FALSE(ky_fan_dominates(SingularProfile{Vector::Constant(3, 1.0)},
                                 SingularProfile{Vector::Constant(1, 1.0)}));
}

TEST_CASE("optimal truncation residual dominates random rank-k residuals") {
    oracle::Rng rng(21);
    const Matrix a    = oracle::gaussian(6, 5, rng);
    const Matrix best = a - truncate(a, 2).matrix;
    for (int i = 0; i < 200; ++i)
        CHECK(ky_fan_dominates(best, Matrix(a - oracle::random_rank_k(6, 5, 2, rng)), 1e-8));
}

TEST_CASE("unitary invariance") {
    oracle::Rng rng(31);
    for (int t = 0; t < 10; ++t) {
        const Matrix a = oracle::gaussian(5, 4, rng);
        const Matrix u = oracle::random_orthogonal(5, rng);
        const Matrix v = oracle::random_orthogonal(4, rng);
        for (const auto &s : kp_panel()) {
            const double base = evaluate(s, a);
            CHECK(std::abs(evaluate(s, Matrix(u * a * v)) - base) <= 1e-8 * (1 + base));
        }
    }
}

TEST_CASE("triangle inequality and homogeneity") {
    oracle::Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        const Matrix a = oracle::gaussian(4, 5, rng);
        const Matrix b = oracle::gaussian(4, 5, rng);
        const double c = -2.5 + 0.3 * t;
        for (const auto &s : kp_panel()) {
            CHECK(evaluate(s, Matrix(a + b)) <= evaluate(s, a) + evaluate(s, b) + 1e-10);
            const double lhs = evaluate(s, Matrix(c * a));
            const double rhs = std::abs(c) * evaluate(s, a);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1 + rhs));
        }
    }
}

TEST_CASE("pinching never increases a unitarily invariant norm") {
    oracle::Rng rng(51);
    for (int t = 0; t < 20; ++t) {
        const Matrix full = oracle::gaussian(5, 5, rng);
        Matrix pinched    = Matrix::Zero(5, 5);
        pinched.topLeftCorner(2, 3)     = full.topLeftCorner(2, 3);
        pinched.bottomRightCorner(3, 2) = full.bottomRightCorner(3, 2);
        for (const auto &s : kp_panel())
            CHECK(evaluate(s, pinched) <= evaluate(s, full) + 1e-8);
    }
}

TEST_CASE("dominance implies every ky fan norm is ordered") {
    oracle::Rng rng(61);
    int seen = 0;
    for (int t = 0; t < 200; ++t) {
        const Matrix a = oracle::gaussian(4, 4, rng);
        const Matrix b = 1.5 * oracle::gaussian(4, 4, rng);
        if (!ky_fan_dominates(a, b))
            continue;
        ++seen;
        for (Index k = 1; k <= 4; ++k)
            CHECK(evaluate(NormSpec::ky_fan(k), a) <= evaluate(NormSpec::ky_fan(k), b) + 1e-9);
    }
    CHECK(seen > 0);
}

TEST_CASE("partial sums") {
    const SingularProfile p{(Vector(3) << 3, 2, 1).finished()};
    CHECK(p.partial_sum(0) == 0);
    CHECK(p.partial_sum(2) == 5);
    CHECK(p.partial_sum(9) == 6);
}

}
