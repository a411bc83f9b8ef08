#include "lrsc/oracle.hpp"
#include "lrsc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lrsc::oracle {

void GridSpec::validate() const {
    if (!(lo < hi) || !(step > 0.0) || refine_rounds < 0)
        throw InvalidInput("grid spec: need lo < hi, step > 0, refine_rounds >= 0");
}

namespace {

double checked(double v) {
    if (!std::isfinite(v))
        throw OracleError("grid_minimize: objective is not finite on the grid");
    return v;
}

// Strict improvement with a relative guard, so round-off on flat objectives
// does not move the incumbent.
bool better(double cand, double best) {
    return cand < best - 1e-13 * (1.0 + std::abs(best));
}

Index cells(double lo, double hi, double step) {
    return static_cast<Index>(std::floor((hi - lo) / step + 1e-9));
}

} // namespace

GridMin1 grid_minimize(const std::function<double(double)> &f, const GridSpec &spec) {
    spec.validate();
    double lo = spec.lo, hi = spec.hi, step = spec.step;
    GridMin1 best{lo, checked(f(lo))};
    for (int round = 0; round <= spec.refine_rounds; ++round) {
        const Index n = cells(lo, hi, step);
        for (Index i = 0; i <= n; ++i) {
            const double x = lo + static_cast<double>(i) * step;
            const double v = checked(f(x));
            if (better(v, best.value))
                best = {x, v};
        }
        lo = std::max(spec.lo, best.argmin - step);
        hi = std::min(spec.hi, best.argmin + step);
        step /= 10.0;
        if (!(lo < hi))
            break;
    }
    return best;
}

GridMin2 grid_minimize(const std::function<double(double, double)> &f, const GridSpec &xs,
                       const GridSpec &ys) {
    xs.validate();
    ys.validate();
    double xlo = xs.lo, xhi = xs.hi, xstep = xs.step;
    double ylo = ys.lo, yhi = ys.hi, ystep = ys.step;
    GridMin2 best{{xlo, ylo}, checked(f(xlo, ylo))};
    const int rounds = std::max(xs.refine_rounds, ys.refine_rounds);
    for (int round = 0; round <= rounds; ++round) {
        const Index nx = cells(xlo, xhi, xstep);
        const Index ny = cells(ylo, yhi, ystep);
        for (Index i = 0; i <= nx; ++i) {
            const double x = xlo + static_cast<double>(i) * xstep;
            for (Index j = 0; j <= ny; ++j) {
                const double y = ylo + static_cast<double>(j) * ystep;
                const double v = checked(f(x, y));
                if (better(v, best.value))
                    best = {{x, y}, v};
            }
        }
        xlo = std::max(xs.lo, best.argmin[0] - xstep);
        xhi = std::min(xs.hi, best.argmin[0] + xstep);
        ylo = std::max(ys.lo, best.argmin[1] - ystep);
        yhi = std::min(ys.hi, best.argmin[1] + ystep);
        xstep /= 10.0;
        ystep /= 10.0;
        if (!(xlo < xhi) || !(ylo < yhi))
            break;
    }
    return best;
}

bool sample_falsify(double candidate_value, const std::function<double(Rng &)> &draw,
                    Index n, std::uint64_t seed) {
    if (n < 1)
        throw InvalidInput("sample_falsify: n must be >= 1");
    Rng rng(seed);
    for (Index i = 0; i < n; ++i)
        if (draw(rng) < candidate_value - 1e-8)
            return false;
    return true;
}

Matrix gaussian(Index rows, Index cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            g(i, j) = normal(rng);
    return g;
}

Matrix random_orthonormal(Index m, Index r, Rng &rng) {
    if (r > m)
        throw InvalidInput("random_orthonormal: r > m");
    const Matrix g = gaussian(m, r, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(m, r);
    const Matrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (Index j = 0; j < r; ++j)
        if (rr(j, j) < 0.0)
            q.col(j) = -q.col(j);
    return q;
}

Matrix random_orthogonal(Index n, Rng &rng) { return random_orthonormal(n, n, rng); }

Matrix random_rank_k(Index rows, Index cols, Index k, Rng &rng) {
    if (k == 0)
        return Matrix::Zero(rows, cols);
    const Matrix g = gaussian(rows, k, rng);
    const Matrix h = gaussian(cols, k, rng);
    return g * h.transpose();
}

Matrix perturb_rank_k(const Matrix &center, Index k, double eps, Rng &rng) {
    if (k == 0)
        return Matrix::Zero(center.rows(), center.cols());
    Eigen::BDCSVD<Matrix> svd(center, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index keep = std::min<Index>(k, svd.singularValues().size());
    Matrix g = Matrix::Zero(center.rows(), k);
    Matrix h = Matrix::Zero(center.cols(), k);
    for (Index j = 0; j < keep; ++j) {
        const double s = std::sqrt(svd.singularValues()(j));
        g.col(j)       = s * svd.matrixU().col(j);
        h.col(j)       = s * svd.matrixV().col(j);
    }
    g += eps * gaussian(center.rows(), k, rng);
    h += eps * gaussian(center.cols(), k, rng);
    return g * h.transpose();
}

Matrix gradient_descent(const std::function<double(const Matrix &)> &f,
                        const std::function<Matrix(const Matrix &)> &grad, Matrix x,
                        double grad_tol, int max_iter) {
    double fx   = f(x);
    double step = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Matrix g  = grad(x);
        const double gg = g.squaredNorm();
        if (std::sqrt(gg) < grad_tol)
            break;
        step *= 2.0;
        for (;;) {
            Matrix cand        = x - step * g;
            const double fcand = f(cand);
            if (fcand <= fx - 0.5 * step * gg) {
                x  = std::move(cand);
                fx = fcand;
                break;
            }
            step *= 0.5;
            if (step < 1e-300)
                return x;
        }
    }
    return x;
}

} // namespace lrsc::oracle
