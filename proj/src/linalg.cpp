#include "lrsc/linalg.hpp"
#include "lrsc/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <string>

namespace lrsc {

Matrix SvdFactors::reconstruct() const {
    return u * sigma.asDiagonal() * v.transpose();
}

void require_finite(const Matrix &a, std::string_view what) {
    if (!a.allFinite())
        throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
}

namespace {

Eigen::BDCSVD<Matrix> decompose(const Matrix &a, unsigned options) {
    require_finite(a, "svd");
    return Eigen::BDCSVD<Matrix>(a, options);
}

} // namespace

SvdFactors thin_svd(const Matrix &a, double rank_tol) {
    if (!(rank_tol > 0.0 && rank_tol < 1.0))
        throw InvalidInput("thin_svd: rank_tol must lie in (0, 1)");
    SvdFactors f;
    if (a.size() == 0) {
        f.u.resize(a.rows(), 0);
        f.v.resize(a.cols(), 0);
        return f;
    }
    auto svd       = decompose(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    Index r        = 0;
    if (sv.size() > 0 && sv(0) > 0.0) {
        const double cutoff = rank_tol * sv(0);
        while (r < sv.size() && sv(r) > cutoff)
            ++r;
    }
    f.u     = svd.matrixU().leftCols(r);
    f.sigma = sv.head(r);
    f.v     = svd.matrixV().leftCols(r);
    return f;
}

Vector singular_values(const Matrix &a) {
    if (a.size() == 0)
        return Vector(0);
    return decompose(a, 0).singularValues();
}

Index numerical_rank(const Matrix &a, double rank_tol, double scale) {
    const Vector sv = singular_values(a);
    if (sv.size() == 0)
        return 0;
    const double ref = std::max(sv(0), scale);
    if (ref <= 0.0)
        return 0;
    return (sv.array() > rank_tol * ref).count();
}

bool truncation_unique(const Vector &sigma, Index k, double gap_tol) {
    if (k <= 0 || k >= sigma.size())
        return true;
    return sigma(k - 1) - sigma(k) > gap_tol * sigma(0);
}

Truncation truncate(const SvdFactors &f, Index k, double gap_tol) {
    if (k < 0)
        throw InvalidInput("truncate: k must be non-negative");
    const Index keep = std::min(k, f.rank());
    Truncation t;
    t.matrix = f.u.leftCols(keep) * f.sigma.head(keep).asDiagonal() *
               f.v.leftCols(keep).transpose();
    t.unique = truncation_unique(f.sigma, k, gap_tol);
    return t;
}

Truncation truncate(const Matrix &a, Index k, double rank_tol, double gap_tol) {
    return truncate(thin_svd(a, rank_tol), k, gap_tol);
}

Matrix pinv(const SvdFactors &f) {
    return f.v * f.sigma.cwiseInverse().asDiagonal() * f.u.transpose();
}

Matrix pinv(const Matrix &a, double rank_tol) { return pinv(thin_svd(a, rank_tol)); }

Projectors projectors(const Matrix &b, double rank_tol) {
    const SvdFactors f = thin_svd(b, rank_tol);
    return {f.u * f.u.transpose(), f.v * f.v.transpose()};
}

Matrix orth_complement(const Matrix &basis, double tol) {
    require_finite(basis, "orth_complement");
    const Index m = basis.rows();
    const Index r = basis.cols();
    if (r > m)
        throw InvalidInput("orth_complement: more columns than rows");
    if (r == 0)
        return Matrix::Identity(m, m);
    const Matrix gram = basis.transpose() * basis;
    if ((gram - Matrix::Identity(r, r)).norm() > tol)
        throw InvalidInput("orth_complement: basis columns are not orthonormal");
    Eigen::HouseholderQR<Matrix> qr(basis);
    const Matrix q = qr.householderQ();
    return q.rightCols(m - r);
}

} // namespace lrsc
