#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace lrsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index  = Eigen::Index;

/// Singular values at or below rank_tol * sigma_1 are treated as zero.
inline constexpr double kDefaultRankTol = 1e-10;
/// Truncation is unique when sigma_k - sigma_{k+1} exceeds gap_tol * sigma_1.
inline constexpr double kDefaultGapTol = 1e-8;

/// Thin SVD keeping only the numerically nonzero part, a = u * diag(sigma) * v^T.
///
/// u is m x r and v is n x r, both with orthonormal columns; sigma is strictly
/// positive and sorted descending. The zero matrix yields r = 0 with empty
/// factors of shape m x 0 and n x 0. Singular vector signs are whatever the
/// underlying decomposition returns.
struct SvdFactors {
    Matrix u;
    Vector sigma;
    Matrix v;

    Index rank() const noexcept { return sigma.size(); }
    Index rows() const noexcept { return u.rows(); }
    Index cols() const noexcept { return v.rows(); }
    Matrix reconstruct() const;
};

/// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const Matrix &a, std::string_view what);

SvdFactors thin_svd(const Matrix &a, double rank_tol = kDefaultRankTol);

/// Full singular spectrum of length min(m, n), descending, zeros included.
Vector singular_values(const Matrix &a);

/// Count of singular values above rank_tol * max(sigma_1, scale).
///
/// A positive scale gives an absolute reference so that round-off residuals
/// of an otherwise zero matrix do not register as full rank.
Index numerical_rank(const Matrix &a, double rank_tol = kDefaultRankTol,
                     double scale = 0.0);

struct Truncation {
    Matrix matrix;
    bool unique = true;
};

/// Best rank-k approximation A_(k). When sigma_k and sigma_{k+1} tie, the
/// first k vectors in decomposition order are kept and unique is false.
Truncation truncate(const Matrix &a, Index k, double rank_tol = kDefaultRankTol,
                    double gap_tol = kDefaultGapTol);
Truncation truncate(const SvdFactors &f, Index k, double gap_tol = kDefaultGapTol);

/// Uniqueness of the rank-k truncation given the kept spectrum.
bool truncation_unique(const Vector &sigma, Index k, double gap_tol = kDefaultGapTol);

/// Moore-Penrose pseudo-inverse v * diag(1/sigma) * u^T.
Matrix pinv(const Matrix &a, double rank_tol = kDefaultRankTol);
Matrix pinv(const SvdFactors &f);

struct Projectors {
    Matrix left;  ///< u u^T, m x m
    Matrix right; ///< v v^T, n x n
};

Projectors projectors(const Matrix &b, double rank_tol = kDefaultRankTol);

/// Orthonormal basis of the complement of span(basis). basis must have
/// orthonormal columns (checked to tol); an m x m basis yields m x 0.
Matrix orth_complement(const Matrix &basis, double tol = 1e-8);

} // namespace lrsc
