#include "lrsc/clustering.hpp"
#include "lrsc/errors.hpp"
#include "lrsc/norms.hpp"
#include "lrsc/prox.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace lrsc {

int Dataset::num_classes() const {
    if (!labels || labels->empty())
        return 0;
    return *std::max_element(labels->begin(), labels->end()) + 1;
}

void Dataset::validate() const {
    require_finite(points, "dataset");
    if (!labels)
        return;
    if (static_cast<Index>(labels->size()) != points.cols())
        throw InvalidInput("dataset: label count " + std::to_string(labels->size()) +
                           " does not match point count " + std::to_string(points.cols()));
    const int k = num_classes();
    std::vector<Index> counts(static_cast<std::size_t>(std::max(k, 0)), 0);
    for (int l : *labels) {
        if (l < 0)
            throw InvalidInput("dataset: negative label");
        ++counts[static_cast<std::size_t>(l)];
    }
    for (int c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw InvalidInput("dataset: class " + std::to_string(c) + " is empty");
}

std::string_view method_name(Method m) {
    switch (m) {
    case Method::Sim:
        return "sim";
    case Method::Dssim:
        return "dssim";
    case Method::Cssim:
        return "cssim";
    case Method::Ssim:
        return "ssim";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::Sim, Method::Dssim, Method::Cssim, Method::Ssim})
        if (name == method_name(m))
            return m;
    throw ConfigError("unknown method '" + std::string(name) +
                      "' (expected sim, dssim, cssim or ssim)");
}

namespace {

void require_lambda(double lambda, const char *who) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidInput(std::string(who) + ": lambda must be non-negative and finite");
}

Matrix frame(const SvdFactors &f, const Vector &coef) {
    return f.v * coef.asDiagonal() * f.v.transpose();
}

Index dssim_rank(const Vector &sigma, double lambda) {
    // objective(r) = sum_{i>r} sigma_i + lambda * r
    double tail     = sigma.sum();
    double best     = tail;
    Index best_r    = 0;
    for (Index r = 1; r <= sigma.size(); ++r) {
        tail -= sigma(r - 1);
        const double obj = tail + lambda * static_cast<double>(r);
        if (obj < best - 1e-12 * (1.0 + std::abs(best))) {
            best   = obj;
            best_r = r;
        }
    }
    return best_r;
}

} // namespace

Matrix reconstruction(const SvdFactors &f, Method m, double lambda, Index *chosen_rank) {
    const Index n = f.rank();
    Vector coef   = Vector::Ones(n);
    switch (m) {
    case Method::Sim:
        break;
    case Method::Dssim: {
        require_lambda(lambda, "dssim");
        const Index r = dssim_rank(f.sigma, lambda);
        coef.tail(n - r).setZero();
        break;
    }
    case Method::Cssim:
        require_lambda(lambda, "cssim");
        coef = vector_rule(NormSpec::squared_frobenius(), NormSpec::trace(), f.sigma, f.sigma,
                           Vector::Ones(n), lambda);
        break;
    case Method::Ssim:
        require_lambda(lambda, "ssim");
        coef = vector_rule(NormSpec::squared_frobenius(), NormSpec::squared_frobenius(),
                           f.sigma, f.sigma, Vector::Ones(n), lambda);
        break;
    }
    if (chosen_rank)
        *chosen_rank = (coef.array() > 0.0).count();
    return frame(f, coef);
}

Matrix sim(const Matrix &x, double rank_tol) {
    return reconstruction(thin_svd(x, rank_tol), Method::Sim, 0.0);
}

DssimResult dssim(const Matrix &x, double lambda, double rank_tol) {
    DssimResult out;
    out.z = reconstruction(thin_svd(x, rank_tol), Method::Dssim, lambda, &out.r);
    return out;
}

Matrix dssim_fixed_rank(const Matrix &x, Index r, double rank_tol) {
    if (r < 0)
        throw InvalidInput("dssim_fixed_rank: r must be non-negative");
    const SvdFactors f = thin_svd(x, rank_tol);
    const Index keep   = std::min(r, f.rank());
    return f.v.leftCols(keep) * f.v.leftCols(keep).transpose();
}

Matrix cssim(const Matrix &x, double lambda, double rank_tol) {
    return reconstruction(thin_svd(x, rank_tol), Method::Cssim, lambda);
}

Matrix ssim(const Matrix &x, double lambda, double rank_tol) {
    return reconstruction(thin_svd(x, rank_tol), Method::Ssim, lambda);
}

Matrix affinity(const Matrix &z) {
    if (z.rows() != z.cols())
        throw InvalidInput("affinity: reconstruction matrix must be square");
    require_finite(z, "affinity");
    return z.cwiseAbs() + z.transpose().cwiseAbs();
}

namespace {

using Rng = std::mt19937_64;

struct KMeansFit {
    Labels labels;
    double inertia = std::numeric_limits<double>::infinity();
};

// k-means++ seeding followed by Lloyd iterations. Rows of pts are points.
KMeansFit kmeans_once(const Matrix &pts, int k, int max_iter, Rng &rng) {
    const Index n = pts.rows();
    Matrix centers(k, pts.cols());
    Vector d2 = Vector::Constant(n, std::numeric_limits<double>::infinity());

    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    centers.row(0) = pts.row(pick(rng));
    for (int c = 1; c < k; ++c) {
        for (Index i = 0; i < n; ++i)
            d2(i) = std::min(d2(i), (pts.row(i) - centers.row(c - 1)).squaredNorm());
        const double total = d2.sum();
        Index chosen       = pick(rng);
        if (total > 0.0) {
            double target = unit(rng) * total;
            chosen        = n - 1;
            for (Index i = 0; i < n; ++i) {
                target -= d2(i);
                if (target < 0.0) {
                    chosen = i;
                    break;
                }
            }
        }
        centers.row(c) = pts.row(chosen);
    }

    KMeansFit fit;
    fit.labels.assign(static_cast<std::size_t>(n), -1);
    Vector dist(n);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            int best_c    = 0;
            double best_d = (pts.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (pts.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            dist(i) = best_d;
            if (fit.labels[static_cast<std::size_t>(i)] != best_c) {
                fit.labels[static_cast<std::size_t>(i)] = best_c;
                changed = true;
            }
        }
        if (!changed)
            break;
        Matrix sums = Matrix::Zero(k, pts.cols());
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            const int c = fit.labels[static_cast<std::size_t>(i)];
            sums.row(c) += pts.row(i);
            ++counts[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            } else {
                // Empty cluster: move it onto the worst-served point.
                Index far;
                dist.maxCoeff(&far);
                centers.row(c) = pts.row(far);
                dist(far)      = 0.0;
            }
        }
    }
    fit.inertia = 0.0;
    for (Index i = 0; i < n; ++i)
        fit.inertia += (pts.row(i) - centers.row(fit.labels[static_cast<std::size_t>(i)])).squaredNorm();
    return fit;
}

// Minimum-cost perfect assignment on a square cost matrix (Hungarian method,
// potentials formulation). Returns row -> column.
std::vector<int> hungarian(const Matrix &cost) {
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0]   = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0]     = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1       = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j]  = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1    = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0]        = p[j1];
            j0           = j1;
        } while (j0);
    }
    std::vector<int> assign(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0)
            assign[p[j] - 1] = j - 1;
    return assign;
}

} // namespace

SpectralResult spectral_cluster(const Matrix &w, int k, std::uint64_t seed,
                                const SpectralOptions &opts) {
    if (w.rows() != w.cols())
        throw InvalidInput("spectral_cluster: affinity must be square");
    require_finite(w, "spectral_cluster");
    const Index n = w.rows();
    if (k < 1)
        throw InvalidInput("spectral_cluster: k must be >= 1");
    if (k > n)
        throw InvalidInput("spectral_cluster: k = " + std::to_string(k) +
                           " exceeds the number of points " + std::to_string(n));
    if ((w.array() < 0.0).any())
        throw InvalidInput("spectral_cluster: affinity must be non-negative");

    SpectralResult out;
    out.labels.assign(static_cast<std::size_t>(n), 0);

    const Vector degree = w.rowwise().sum();
    const double top    = degree.size() ? degree.maxCoeff() : 0.0;
    std::vector<Index> live;
    for (Index i = 0; i < n; ++i)
        if (degree(i) > opts.isolated_tol * top && degree(i) > 0.0)
            live.push_back(i);
    out.isolated   = n - static_cast<Index>(live.size());
    out.degenerate = out.isolated > 0;
    if (k == 1 || live.empty())
        return out;

    const Index m = static_cast<Index>(live.size());
    Vector inv_sqrt(m);
    for (Index a = 0; a < m; ++a)
        inv_sqrt(a) = 1.0 / std::sqrt(degree(live[a]));
    Matrix lap(m, m);
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b)
            lap(a, b) = (a == b ? 1.0 : 0.0) - inv_sqrt(a) * w(live[a], live[b]) * inv_sqrt(b);
    lap = 0.5 * (lap + lap.transpose()).eval();

    const int keff = static_cast<int>(std::min<Index>(k, m));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
    Matrix emb = eig.eigenvectors().leftCols(keff);
    for (Index a = 0; a < m; ++a) {
        const double nr = emb.row(a).norm();
        if (nr > 0.0)
            emb.row(a) /= nr;
    }

    Rng rng(seed);
    KMeansFit best;
    for (int rs = 0; rs < std::max(1, opts.restarts); ++rs) {
        KMeansFit fit = kmeans_once(emb, keff, opts.max_iter, rng);
        if (fit.inertia < best.inertia - 1e-12 * (1.0 + std::abs(fit.inertia)))
            best = std::move(fit);
    }

    std::vector<Index> counts(static_cast<std::size_t>(keff), 0);
    for (Index a = 0; a < m; ++a) {
        const int l = best.labels[static_cast<std::size_t>(a)];
        out.labels[static_cast<std::size_t>(live[a])] = l;
        ++counts[static_cast<std::size_t>(l)];
    }
    if (out.isolated > 0) {
        const int largest = static_cast<int>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        std::vector<char> is_live(static_cast<std::size_t>(n), 0);
        for (Index i : live)
            is_live[static_cast<std::size_t>(i)] = 1;
        for (Index i = 0; i < n; ++i)
            if (!is_live[static_cast<std::size_t>(i)])
                out.labels[static_cast<std::size_t>(i)] = largest;
    }
    return out;
}

double accuracy(const Labels &pred, const Labels &truth) {
    if (pred.size() != truth.size())
        throw InvalidInput("accuracy: label vectors differ in length");
    if (pred.empty())
        return 1.0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] < 0 || truth[i] < 0)
            throw InvalidInput("accuracy: labels must be non-negative");
    const int kp = *std::max_element(pred.begin(), pred.end()) + 1;
    const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
    const int n  = std::max(kp, kt);
    Matrix confusion = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < pred.size(); ++i)
        confusion(pred[i], truth[i]) += 1.0;
    const std::vector<int> assign = hungarian(-confusion);
    double matched = 0.0;
    for (int r = 0; r < n; ++r)
        matched += confusion(r, assign[static_cast<std::size_t>(r)]);
    return matched / static_cast<double>(pred.size());
}

ClusterResult run_pipeline(const Dataset &data, Method method, double lambda, int k,
                           std::uint64_t seed, const SpectralOptions &opts) {
    data.validate();
    if (method != Method::Sim)
        require_lambda(lambda, "run_pipeline");
    ClusterResult res;
    res.method      = method;
    res.lambda_or_r = method == Method::Sim ? 0.0 : lambda;

    const auto t0      = std::chrono::steady_clock::now();
    const SvdFactors f = thin_svd(data.points);
    res.z              = reconstruction(f, method, res.lambda_or_r, &res.kept_rank);
    const auto t1      = std::chrono::steady_clock::now();
    res.reconstruction_seconds = std::chrono::duration<double>(t1 - t0).count();

    res.affinity            = affinity(res.z);
    const SpectralResult sc = spectral_cluster(res.affinity, k, seed, opts);
    res.labels              = sc.labels;
    res.degenerate          = sc.degenerate;
    if (data.labels)
        res.accuracy = accuracy(res.labels, *data.labels);
    return res;
}

} // namespace lrsc
