#include "support.hpp"

#include "lrsc/errors.hpp"
#include "lrsc/eym.hpp"
#include "lrsc/norms.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace lrsc;
using namespace lrsc::oracle;

TEST_SUITE("oracle") {

TEST_CASE("grid minimization in one dimension") {
    const GridMin1 g = grid_minimize([](double x) { return (x - 1) * (x - 1); }, GridSpec{});
    CHECK(std::abs(g.argmin - 1.0) <= 1e-3);

    const GridMin1 c = grid_minimize([](double x) { double s = 2, l = 2; return (s - s * x) * (s - s * x) + l * x; },
                                     GridSpec{});
    CHECK(std::abs(c.argmin - 0.75) <= 1e-3);

    // earliest point wins on a flat objective
    const GridMin1 flat = grid_minimize([](double) { return 1.0; }, GridSpec{0, 1, 0.1, 1});
    CHECK(flat.argmin == 0.0);
}

TEST_CASE("refinement never worsens the coarse answer") {
    auto f = [](double x) { return std::cos(3 * x) + 0.1 * x * x; };
    const GridMin1 coarse = grid_minimize(f, GridSpec{-5, 5, 1e-2, 0});
    const GridMin1 fine   = grid_minimize(f, GridSpec{-5, 5, 1e-2, 2});
    CHECK(fine.value <= coarse.value);
}

TEST_CASE("grid minimization in two dimensions") {
    const GridMin2 g = grid_minimize([](double x, double y) { return (x - 0.3) * (x - 0.3) + (y + 1.2) * (y + 1.2); },
                                     GridSpec{-2, 2, 1e-2, 1}, GridSpec{-2, 2, 1e-2, 1});
    CHECK(std::abs(g.argmin[0] - 0.3) <= 1e-3);
    CHECK(std::abs(g.argmin[1] + 1.2) <= 1e-3);
}

TEST_CASE("grid errors") {
    CHECK_THROWS_AS(grid_minimize([](double) { return std::numeric_limits<double>::quiet_NaN(); }, GridSpec{}),
                    OracleError);
    CHECK_THROWS_AS(grid_minimize([](double x) { return x; }, GridSpec{1, 0, 0.1, 1}), Error);
    CHECK_THROWS_AS(grid_minimize([](double x) { return x; }, GridSpec{0, 1, 0, 1}), Error);
}

TEST_CASE("sampling falsifier") {
    CHECK(sample_falsify(1.0, [](Rng &) { return 1.0; }, 100, 0));
    int n = 0;
    CHECK_FALSE(sample_falsify(1.0, [&](Rng &) { return ++n == 50 ? 0.5 : 2.0; }, 100, 0));

    Rng rng(3);
    const Matrix a      = gaussian(5, 4, rng);
    const SolveReport r = eym(a, 2);
    CHECK(sample_falsify(r.objective, [&](Rng &g) { return (a - random_rank_k(5, 4, 2, g)).norm(); }, 1000, 1));
}

TEST_CASE("random generators") {
    Rng rng(5);
    const Matrix q = random_orthonormal(6, 3, rng);
    CHECK((q.transpose() * q - Matrix::Identity(3, 3)).norm() <= 1e-12);
    const Matrix o = random_orthogonal(4, rng);
    CHECK((o * o.transpose() - Matrix::Identity(4, 4)).norm() <= 1e-12);
    CHECK(numerical_rank(random_rank_k(7, 6, 3, rng)) == 3);
    const Matrix center = truncate(gaussian(5, 5, rng), 2).matrix;
    const Matrix moved  = perturb_rank_k(center, 2, 1e-2, rng);
    CHECK(numerical_rank(moved) <= 2);
    CHECK((moved - center).norm() <= 0.5);

    Rng a(11), b(11);
    CHECK((gaussian(3, 3, a) - gaussian(3, 3, b)).norm() == 0.0);
}

TEST_CASE("gradient descent on a quadratic") {
    const Matrix target = (Matrix(2, 2) << 1, -2, 3, 0.5).finished();
    auto f = [&](const Matrix &x) { return (x - target).squaredNorm(); };
    auto g = [&](const Matrix &x) { return Matrix(2 * (x - target)); };
    const Matrix x = gradient_descent(f, g, Matrix::Zero(2, 2));
    CHECK((x - target).norm() <= 1e-8);
}

}
