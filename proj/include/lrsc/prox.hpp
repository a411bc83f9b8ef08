#pragma once

#include "lrsc/eym.hpp"
#include "lrsc/linalg.hpp"
#include "lrsc/norms.hpp"

namespace lrsc {

/// Which closed-form reduction applies.
///  - Plain:          B = C = I, X = sum_i x_i u_i v_i^T over the SVD of A.
///  - SelfExpressive: B = A, C = I, X = sum_i x_i v_i v_i^T.
///  - GeneralSd:      arbitrary B, C satisfying the SD structure,
///                    X = V_B diag(x) U_C^T.
enum class Structure { Plain, SelfExpressive, GeneralSd };

/// min_X loss(A - BXC) + lambda * reg(X).
struct RegularizedProblem {
    NormSpec loss = NormSpec::squared_frobenius();
    NormSpec reg  = NormSpec::trace();
    double lambda = 1.0;
    Structure structure = Structure::Plain;

    /// Throws InvalidInput for lambda <= 0, NotSupported for a pair outside
    /// the closed-form table (see vector_rule).
    void validate() const;
};

/// True for the (loss, reg) pairs with a closed-form componentwise rule:
/// (fro2, trace), (fro2, fro2) and (trace, trace).
bool pair_supported(const NormSpec &loss, const NormSpec &reg);

/// Componentwise minimizer of
///     sum_i loss_i(sigma_i - s_i x_i) + lambda * reg(x),   x >= 0,
/// with s_i = scale_b_i * scale_c_i:
///   (fro2, trace): x_i = (sigma_i / s_i - lambda / (2 s_i^2))_+
///   (fro2, fro2):  x_i = s_i sigma_i / (s_i^2 + lambda)
///   (trace, trace): x_i = sigma_i / s_i if s_i > lambda else 0
/// With s = 1 this is singular value thresholding; with s = sigma it gives the
/// self-expressive rules (1 - lambda/(2 sigma^2))_+, sigma^2/(sigma^2 + lambda)
/// and the 0/1 hard threshold at sigma > lambda.
Vector vector_rule(const NormSpec &loss, const NormSpec &reg, const Vector &sigma,
                   const Vector &scale_b, const Vector &scale_c, double lambda);

/// Solves a RegularizedProblem in closed form. The two-argument overload
/// covers Plain and SelfExpressive (B and C implied); the four-argument
/// overload checks that b and c match the declared structure and, for
/// GeneralSd, that the SD structure holds (AssumptionViolated otherwise).
/// Objective is loss(A - BXC) + lambda * reg(X).
SolveReport solve_sd(const RegularizedProblem &problem, const Matrix &a,
                     const SolverOptions &opts = {});
SolveReport solve_sd(const RegularizedProblem &problem, const Matrix &a, const Matrix &b,
                     const Matrix &c, const SolverOptions &opts = {});

/// sum_i (sigma_i - lambda/2)_+ u_i v_i^T, the minimizer of
/// ||A - X||_F^2 + lambda * ||X||_tr.
Matrix svt(const Matrix &a, double lambda, double rank_tol = kDefaultRankTol);

} // namespace lrsc
