#pragma once

#include "lrsc/linalg.hpp"
#include "lrsc/norms.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lrsc {

/// Output of every closed-form solver. `solution` is the minimum Frobenius
/// norm optimum; rank objectives are integers stored as double.
struct SolveReport {
    Matrix solution;
    double objective = 0.0;
    bool unique      = true;
    Index chosen_rank = 0;
    bool certified   = false;
    std::optional<std::string> certificate;
};

/// Residuals of the simultaneous block (SB) and simultaneous diagonal (SD)
/// structure conditions, relative to ||A||_F.
struct AssumptionReport {
    bool sb_holds      = false;
    bool sd_holds      = false;
    double sb_residual = 0.0;
    double sd_residual = 0.0;
};

struct SolverOptions {
    double rank_tol       = kDefaultRankTol;
    double gap_tol        = kDefaultGapTol;
    double assumption_tol = 1e-8;
    /// Random rank-k competitors drawn by eym_sb's certificate.
    Index certify_samples       = 200;
    std::uint64_t certify_seed  = 0;
};

/// Certification panel used when none is supplied: trace, Frobenius,
/// spectral and Ky Fan 2.
std::vector<NormSpec> default_norm_panel();

/// Shapes: A is m x n, B is m x p, C is q x n, so X is p x q.
/// sb_residual = max(||U_B^perp^T A V_C||_F, ||U_B^T A V_C^perp||_F) / ||A||_F,
/// sd_residual = off-diagonal mass of U_B^T A V_C over ||A||_F.
AssumptionReport check_assumptions(const Matrix &a, const Matrix &b, const Matrix &c,
                                   double tol = 1e-8,
                                   double rank_tol = kDefaultRankTol);

/// Best rank-k approximation; optimal under every unitarily invariant norm.
/// Objective is the Frobenius residual.
SolveReport eym(const Matrix &a, Index k, const SolverOptions &opts = {});

/// X = B^+ (P_{B,L} A P_{C,R})_(k) C^+, optimal for min ||A - BXC||_F over
/// rank(X) <= k.
SolveReport gen_eym_frobenius(const Matrix &a, const Matrix &b, const Matrix &c, Index k,
                              const SolverOptions &opts = {});

/// Same formula as gen_eym_frobenius, valid for all unitarily invariant norms
/// when the SB structure holds (AssumptionViolated otherwise). The report's
/// certificate records panel norm values and a Ky Fan dominance check
/// against seeded rank-k competitors.
SolveReport eym_sb(const Matrix &a, const Matrix &b, const Matrix &c, Index k,
                   std::span<const NormSpec> norm_panel = {},
                   const SolverOptions &opts = {});

/// X = B^+ (BAC)_(k) C^+ for min ||BAC - BXC|| over rank(X) <= k. Here A is
/// p x q (the shape of X), B is m x p, C is q x n.
SolveReport eym_bac(const Matrix &a, const Matrix &b, const Matrix &c, Index k,
                    const SolverOptions &opts = {});

enum class RankRegMode { Frobenius, Sb };

/// min ||A - BXC|| + lambda * rank(X) by enumerating the rank-constrained
/// problem for k = 0..rank(P_{B,L} A P_{C,R}). Any real lambda is accepted;
/// ties go to the smaller k. Frobenius mode accepts only `fro` or `fro2` as
/// the loss; Sb mode accepts any norm but requires the SB structure.
SolveReport rank_regularized(const Matrix &a, const Matrix &b, const Matrix &c,
                             double lambda, RankRegMode mode,
                             const NormSpec &loss = NormSpec::frobenius(),
                             const SolverOptions &opts = {});

/// min rank(BAC - BXC) + lambda * reg(X) with reg the rank or a unitarily
/// invariant norm. Candidates are X_r = V_B (Ahat - Ahat_(r)) U_C^T with
/// Ahat = V_B^T A U_C; ties go to the smaller reg(X). A is p x q.
SolveReport rank_plus_reg(const Matrix &a, const Matrix &b, const Matrix &c,
                          double lambda, const NormSpec &reg,
                          const SolverOptions &opts = {});

/// Minimum-norm solution B^+ A C^+ of A = BXC. Throws Infeasible when
/// ||B B^+ A C^+ C - A||_F > tol * (1 + ||A||_F). The objective is
/// ||X||_F; the certificate records the feasibility residual.
SolveReport min_norm_exact(const Matrix &a, const Matrix &b, const Matrix &c,
                           double tol = 1e-8, const SolverOptions &opts = {});

} // namespace lrsc
