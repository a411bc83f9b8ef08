#include "support.hpp"

#include "lrsc/errors.hpp"
#include "lrsc/eym.hpp"
#include "lrsc/norms.hpp"
#include "lrsc/prox.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace lrsc;
using lrsc::test::diag;
using lrsc::test::max_abs;

namespace {

const NormSpec kFro2  = NormSpec::squared_frobenius();
const NormSpec kTrace = NormSpec::trace();

struct Pair {
    NormSpec loss, reg;
    std::function<double(double sigma, double s, double lambda, double x)> scalar;
};

std::vector<Pair> pairs() {
    return {
        {kFro2, kTrace, [](double g, double s, double l, double x) { return (g - s * x) * (g - s * x) + l * x; }},
        {kFro2, kFro2, [](double g, double s, double l, double x) { return (g - s * x) * (g - s * x) + l * x * x; }},
        {kTrace, kTrace, [](double g, double s, double l, double x) { return std::abs(g - s * x) + l * x; }},
    };
}

double one_rule(const Pair &p, double sigma, double scale, double lambda) {
    return vector_rule(p.loss, p.reg, Vector::Constant(1, sigma), Vector::Constant(1, scale),
                       Vector::Ones(1), lambda)(0);
}

double problem_objective(const RegularizedProblem &p, const Matrix &a, const Matrix &b,
                         const Matrix &c, const Matrix &x) {
    return evaluate(p.loss, Matrix(a - b * x * c)) + p.lambda * evaluate(p.reg, x);
}

// A, B, C sharing singular frames so that SB and SD hold.
struct SdInstance {
    Matrix a, b, c, vb, uc;
};

SdInstance sd_instance(oracle::Rng &rng) {
    const Matrix q1 = oracle::random_orthonormal(5, 3, rng);
    const Matrix p1 = oracle::random_orthogonal(3, rng);
    const Matrix p2 = oracle::random_orthogonal(3, rng);
    const Matrix q2 = oracle::random_orthonormal(4, 3, rng);
    SdInstance s;
    s.b  = q1 * diag({3, 2, 0.5}) * p1.transpose();
    s.c  = p2 * diag({2, 1, 0.7}) * q2.transpose();
    s.a  = q1 * diag({4, -1.5, 0.3}) * q2.transpose();
    s.vb = p1;
    s.uc = p2;
    return s;
}

} // namespace

TEST_SUITE("prox") {

TEST_CASE("supported pair table") {
    CHECK(pair_supported(kFro2, kTrace));
    CHECK(pair_supported(kFro2, kFro2));
    CHECK(pair_supported(kTrace, kTrace));
    CHECK_FALSE(pair_supported(NormSpec::spectral(), kTrace));
    CHECK_FALSE(pair_supported(kFro2, NormSpec::rank()));
    CHECK_THROWS_AS(vector_rule(NormSpec::spectral(), kTrace, Vector::Ones(1), Vector::Ones(1),
                                Vector::Ones(1), 1.0),
                    NotSupported);
    RegularizedProblem p;
    p.loss = NormSpec::frobenius();
    CHECK_THROWS_AS(p.validate(), NotSupported);
    p.loss   = kFro2;
    p.lambda = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
}

TEST_CASE("vector rules on fixed values") {
    CHECK(one_rule(pairs()[0], 2.0, 2.0, 2.0) == doctest::Approx(0.75));
    CHECK(one_rule(pairs()[1], 1.0, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK(one_rule(pairs()[1], 3.0, 3.0, 0.0) == doctest::Approx(1.0));
    CHECK(one_rule(pairs()[2], 3.0, 3.0, 2.0) == doctest::Approx(1.0));
    CHECK(one_rule(pairs()[2], 1.0, 1.0, 2.0) == 0.0);
    CHECK(one_rule(pairs()[0], 3.0, 1.0, 2.0) == doctest::Approx(2.0));
    CHECK(one_rule(pairs()[0], 1.0, 1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(vector_rule(kFro2, kTrace, Vector::Ones(2), Vector::Ones(1), Vector::Ones(2), 1.0),
                    InvalidInput);
    CHECK_THROWS_AS(vector_rule(kFro2, kTrace, Vector::Ones(1), Vector::Ones(1), Vector::Ones(1), -1.0),
                    InvalidInput);
}

TEST_CASE("every rule matches a one-dimensional grid search") {
    const oracle::GridSpec grid{0.0, 12.0, 1e-4, 2};
    for (const Pair &p : pairs())
        for (double sigma : {0.1, 0.5, 1.0, 2.0, 5.0})
            for (double scale : {1.0, sigma, 0.5})
                for (double lambda : {0.01, 0.1, 1.0, 10.0}) {
                    if (p.loss == kTrace && std::abs(scale - lambda) < 1e-12)
                        continue; // flat objective, any point in [0, sigma/scale] is optimal
                    const double x = one_rule(p, sigma, scale, lambda);
                    auto f = [&](double t) { return p.scalar(sigma, scale, lambda, t); };
                    const auto g = oracle::grid_minimize(f, grid);
                    CHECK(std::abs(x - g.argmin) <= 1e-3);
                    CHECK(std::abs(f(x) - g.value) <= 1e-6);
                    CHECK(f(x) <= g.value + 1e-12);
                }
}

TEST_CASE("shrinkage is monotone in the weight") {
    const Vector sigma = (Vector(4) << 5, 2, 1, 0.3).finished();
    const Vector ones  = Vector::Ones(4);
    for (const Vector &scale : {ones, sigma}) {
        Vector prev = vector_rule(kFro2, kTrace, sigma, scale, ones, 1e-3);
        for (double lambda = 0.01; lambda < 100; lambda *= 1.7) {
            const Vector next = vector_rule(kFro2, kTrace, sigma, scale, ones, lambda);
            CHECK((next.array() <= prev.array() + 1e-15).all());
            CHECK((next.array() >= 0.0).all());
            prev = next;
        }
    }
}

TEST_CASE("plain structure is singular value thresholding") {
    RegularizedProblem p;
    p.lambda = 2.0;
    const SolveReport r = solve_sd(p, diag({3, 1}));
    CHECK(max_abs(r.solution - diag({2, 0})) <= 1e-12);
    CHECK(r.chosen_rank == 1);
    CHECK(max_abs(svt(diag({3, 1}), 2.0) - diag({2, 0})) <= 1e-12);

    CHECK(svt(diag({3, 1}), 6.0).isZero());

    oracle::Rng rng(4);
    const Matrix a = oracle::gaussian(5, 4, rng);
    p.lambda       = 1.0;
    CHECK((svt(a, 1.0) - solve_sd(p, a).solution).cwiseAbs().maxCoeff() == 0.0);

    const SolveReport tiny = solve_sd(RegularizedProblem{kFro2, kTrace, 1e-12, Structure::Plain}, a);
    CHECK(max_abs(tiny.solution - a) <= 1e-10);

    CHECK_THROWS_AS(svt(a, 0.0), InvalidInput);
}

TEST_CASE("plain structure with explicit sides") {
    RegularizedProblem p;
    p.lambda        = 2.0;
    const Matrix id = Matrix::Identity(2, 2);
    CHECK(max_abs(solve_sd(p, diag({3, 1}), id, id).solution - diag({2, 0})) <= 1e-12);
    CHECK_THROWS_AS(solve_sd(p, diag({3, 1}), 2 * id, id), InvalidInput);
}

TEST_CASE("self-expressive structure") {
    oracle::Rng rng(6);
    const Matrix x = oracle::random_rank_k(5, 8, 3, rng);
    RegularizedProblem p{kFro2, kFro2, 0.5, Structure::SelfExpressive};
    const SolveReport r = solve_sd(p, x);
    CHECK(r.solution.rows() == 8);
    CHECK(max_abs(solve_sd(p, x, x, Matrix::Identity(8, 8)).solution - r.solution) <= 1e-15);
    CHECK_THROWS_AS(solve_sd(p, x, 2 * x, Matrix::Identity(8, 8)), InvalidInput);

    p.reg               = kTrace;
    p.loss              = kTrace;
    p.lambda            = 2.0;
    const SolveReport t = solve_sd(p, diag({3, 1}));
    CHECK(max_abs(t.solution - diag({1, 0})) <= 1e-12);
}

TEST_CASE("general SD structure") {
    oracle::Rng rng(8);
    const SdInstance s = sd_instance(rng);
    REQUIRE(check_assumptions(s.a, s.b, s.c).sd_holds);
    for (const Pair &pr : pairs()) {
        const RegularizedProblem p{pr.loss, pr.reg, 0.8, Structure::GeneralSd};
        const SolveReport r = solve_sd(p, s.a, s.b, s.c);
        const double best   = problem_objective(p, s.a, s.b, s.c, r.solution);
        CHECK(r.objective == doctest::Approx(best));

        // off-diagonal moves in the singular frames never help
        for (Index i = 0; i < 3; ++i)
            for (Index j = 0; j < 3; ++j) {
                if (i == j)
                    continue;
                for (double eps : {1e-3, -1e-3}) {
                    const Matrix move = eps * s.vb.col(i) * s.uc.col(j).transpose();
                    CHECK(problem_objective(p, s.a, s.b, s.c, r.solution + move) >= best - 1e-12);
                }
            }

        // convex problem: random points are never better
        for (int t = 0; t < 200; ++t) {
            const Matrix x = r.solution + oracle::gaussian(3, 3, rng) * (t % 2 ? 0.05 : 1.0);
            CHECK(problem_objective(p, s.a, s.b, s.c, x) >= best - 1e-10);
        }
    }
}

TEST_CASE("general SD structure rejects violated assumptions") {
    oracle::Rng rng(10);
    const Matrix a = oracle::gaussian(3, 3, rng);
    const Matrix b = oracle::gaussian(3, 2, rng);
    const Matrix c = oracle::gaussian(2, 3, rng);
    const RegularizedProblem p{kFro2, kTrace, 1.0, Structure::GeneralSd};
    CHECK_THROWS_AS(solve_sd(p, a, b, c), AssumptionViolated);
    const RegularizedProblem q{NormSpec::spectral(), kTrace, 1.0, Structure::GeneralSd};
    CHECK_THROWS_AS(solve_sd(q, a, b, c), NotSupported);
}

}
