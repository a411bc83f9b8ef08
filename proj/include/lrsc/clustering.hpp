#pragma once

#include "lrsc/dataset.hpp"
#include "lrsc/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lrsc {

enum class Method { Sim, Dssim, Cssim, Ssim };

std::string_view method_name(Method m);
/// Accepts `sim`, `dssim`, `cssim`, `ssim`; throws ConfigError otherwise.
Method parse_method(std::string_view name);

/// Shape interaction matrix X^+ X = V V^T.
Matrix sim(const Matrix &x, double rank_tol = kDefaultRankTol);

struct DssimResult {
    Matrix z;
    Index r = 0;
};

/// V_(r) V_(r)^T with r minimizing sum_{i>r} sigma_i + lambda * r, ties to
/// the smaller r.
DssimResult dssim(const Matrix &x, double lambda, double rank_tol = kDefaultRankTol);
/// V_(r) V_(r)^T for a caller-chosen r (clamped to the numerical rank).
Matrix dssim_fixed_rank(const Matrix &x, Index r, double rank_tol = kDefaultRankTol);

/// sum_i (1 - lambda / (2 sigma_i^2))_+ v_i v_i^T.
Matrix cssim(const Matrix &x, double lambda, double rank_tol = kDefaultRankTol);
/// sum_i sigma_i^2 / (sigma_i^2 + lambda) v_i v_i^T. lambda = 0 gives sim().
Matrix ssim(const Matrix &x, double lambda, double rank_tol = kDefaultRankTol);

/// Reconstruction matrix from precomputed factors of x.
Matrix reconstruction(const SvdFactors &f, Method m, double lambda, Index *chosen_rank = nullptr);

/// W_ij = |Z_ij| + |Z_ji|.
Matrix affinity(const Matrix &z);

struct SpectralOptions {
    int restarts  = 20;
    int max_iter  = 300;
    /// Degrees at or below this fraction of the largest degree count as isolated.
    double isolated_tol = 1e-12;
};

struct SpectralResult {
    Labels labels;
    /// Set when some node had (numerically) zero degree.
    bool degenerate = false;
    Index isolated  = 0;
};

/// Normalized-symmetric spectral clustering: bottom-k eigenvectors of
/// I - D^{-1/2} W D^{-1/2}, rows normalized, then k-means++ with
/// `restarts` seeded restarts keeping the lowest inertia. Isolated nodes are
/// put in the largest cluster and flagged. Throws InvalidInput for k > N.
SpectralResult spectral_cluster(const Matrix &w, int k, std::uint64_t seed,
                                const SpectralOptions &opts = {});

/// Fraction of points matched under the best one-to-one relabeling of pred
/// (Hungarian assignment on the confusion matrix).
double accuracy(const Labels &pred, const Labels &truth);

struct ClusterResult {
    Matrix z;
    Matrix affinity;
    Labels labels;
    std::optional<double> accuracy;
    Method method       = Method::Sim;
    double lambda_or_r  = 0.0;
    /// Rank kept by DSSIM, or the count of nonzero coefficients otherwise.
    Index kept_rank     = 0;
    bool degenerate     = false;
    /// Seconds spent building z (SVD included, clustering excluded).
    double reconstruction_seconds = 0.0;
};

/// z -> affinity -> spectral clustering -> accuracy (when labels exist).
/// lambda is ignored for Method::Sim.
ClusterResult run_pipeline(const Dataset &data, Method method, double lambda, int k,
                           std::uint64_t seed, const SpectralOptions &opts = {});

} // namespace lrsc
