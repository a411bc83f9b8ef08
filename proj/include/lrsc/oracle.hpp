#pragma once

#include "lrsc/linalg.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <random>

namespace lrsc::oracle {

using Rng = std::mt19937_64;

/// Exhaustive grid over [lo, hi] at `step`, then `refine_rounds` passes at
/// step/10 around the incumbent.
struct GridSpec {
    double lo           = -5.0;
    double hi           = 5.0;
    double step         = 1e-3;
    int refine_rounds   = 1;

    void validate() const;
};

struct GridMin1 {
    double argmin;
    double value;
};

struct GridMin2 {
    std::array<double, 2> argmin;
    double value;
};

/// Deterministic; ties keep the earliest grid point. Throws OracleError on
/// any non-finite evaluation.
GridMin1 grid_minimize(const std::function<double(double)> &f, const GridSpec &spec);
GridMin2 grid_minimize(const std::function<double(double, double)> &f,
                       const GridSpec &x, const GridSpec &y);

/// Returns true iff none of n seeded draws evaluates below
/// candidate_value - 1e-8. A falsification test, not a proof.
bool sample_falsify(double candidate_value, const std::function<double(Rng &)> &draw,
                    Index n, std::uint64_t seed);

Matrix gaussian(Index rows, Index cols, Rng &rng);
/// Haar-distributed orthogonal n x n matrix (QR of a Gaussian with sign fix).
Matrix random_orthogonal(Index n, Rng &rng);
/// Random m x r matrix with orthonormal columns.
Matrix random_orthonormal(Index m, Index r, Rng &rng);
/// G * H^T with standard-normal G (rows x k) and H (cols x k).
Matrix random_rank_k(Index rows, Index cols, Index k, Rng &rng);
/// Rank-k matrix near `center`: its leading rank-k factors plus eps-scaled
/// Gaussian noise on both factors.
Matrix perturb_rank_k(const Matrix &center, Index k, double eps, Rng &rng);

/// Minimizes a smooth convex f by gradient descent with Armijo backtracking,
/// stopping when the gradient norm drops below grad_tol.
Matrix gradient_descent(const std::function<double(const Matrix &)> &f,
                        const std::function<Matrix(const Matrix &)> &grad, Matrix x0,
                        double grad_tol = 1e-10, int max_iter = 200000);

} // namespace lrsc::oracle
