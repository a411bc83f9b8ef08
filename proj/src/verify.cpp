#include "lrsc/verify.hpp"
#include "lrsc/bench.hpp"
#include "lrsc/clustering.hpp"
#include "lrsc/eym.hpp"
#include "lrsc/norms.hpp"
#include "lrsc/oracle.hpp"
#include "lrsc/prox.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace lrsc {

namespace {

using oracle::GridSpec;
using oracle::Rng;

// Stored reference values.
constexpr double kCssimCoef        = 0.75;   // sigma = 2, lambda = 2
constexpr double kSvtDiag31[2]     = {2.0, 0.0};
constexpr double kTraceTrace31[2]  = {1.0, 0.0};
constexpr Index kDssimRank31       = 1;
constexpr Index kRankRegDiag321    = 1;      // lambda = 1.5
constexpr double kAccuracyExample  = 0.75;
constexpr Index kGramRank          = 10;
constexpr double kSbTraceOptimum   = 0.8740320488976421; // sigma_2([[2,1],[0,1]])
constexpr double kEx2TraceArgmin   = 0.5;
constexpr double kEx2TraceValue    = 2.5;
constexpr double kEx2FroArgmin     = 1.0;

struct Recorder {
    std::vector<VerifyCheck> checks;

    void add(std::string name, bool ok, const std::string &detail) {
        checks.push_back({std::move(name), ok, detail});
    }
};

std::string show(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

GridSpec nonneg_grid(double hi) { return {0.0, hi, 1e-4, 2}; }

double trace2x2(const Matrix &r) {
    // sigma_1 + sigma_2 = sqrt(||R||_F^2 + 2 |det R|) for 2 x 2 matrices
    return std::sqrt(r.squaredNorm() + 2.0 * std::abs(r.determinant()));
}

void check_rules(Recorder &rec) {
    {
        const double s = 2.0, l = 2.0;
        auto f = [&](double x) { return (s - s * x) * (s - s * x) + l * x; };
        const auto g = oracle::grid_minimize(f, nonneg_grid(2.0));
        // stationarity: -2 s^2 (1 - x) + l = 0
        const double stationary = 1.0 - l / (2.0 * s * s);
        const Vector x = vector_rule(NormSpec::squared_frobenius(), NormSpec::trace(),
                                     Vector::Constant(1, s), Vector::Constant(1, s),
                                     Vector::Ones(1), l);
        Matrix data = Matrix::Zero(2, 3);
        data(0, 0)  = s;
        const Matrix z = cssim(data, l);
        const bool ok = std::abs(g.argmin - kCssimCoef) <= 1e-3 &&
                        std::abs(stationary - kCssimCoef) <= 1e-12 &&
                        std::abs(x(0) - kCssimCoef) <= 1e-12 &&
                        std::abs(z(0, 0) - kCssimCoef) <= 1e-12;
        rec.add("cssim coefficient sigma=2 lambda=2", ok,
                "grid " + show(g.argmin) + ", rule " + show(x(0)) + ", expected 0.75");
    }
    {
        const double sig[2] = {3.0, 1.0};
        const double l      = 2.0;
        Matrix a            = Matrix::Zero(2, 2);
        a.diagonal() << 3.0, 1.0;
        const Matrix x = svt(a, l);
        RegularizedProblem prob{NormSpec::squared_frobenius(), NormSpec::trace(), l,
                                Structure::Plain};
        const SolveReport sd = solve_sd(prob, a);
        bool ok              = (x - sd.solution).norm() == 0.0;
        std::string detail;
        for (int i = 0; i < 2; ++i) {
            auto f = [&](double v) { return (sig[i] - v) * (sig[i] - v) + l * v; };
            const auto g = oracle::grid_minimize(f, nonneg_grid(5.0));
            ok = ok && std::abs(g.argmin - kSvtDiag31[i]) <= 1e-3 &&
                 std::abs(x(i, i) - kSvtDiag31[i]) <= 1e-12;
            detail += (i ? ", " : "") + std::string("grid ") + show(g.argmin);
        }
        rec.add("svt diag(3,1) lambda=2 -> diag(2,0)", ok, detail);
    }
    {
        const double sig[2] = {3.0, 1.0};
        const double l      = 2.0;
        Vector s(2);
        s << 3.0, 1.0;
        const Vector x = vector_rule(NormSpec::trace(), NormSpec::trace(), s, s,
                                     Vector::Ones(2), l);
        bool ok = true;
        std::string detail;
        for (int i = 0; i < 2; ++i) {
            auto f = [&](double v) { return sig[i] * std::abs(1.0 - v) + l * v; };
            const auto g = oracle::grid_minimize(f, nonneg_grid(2.0));
            ok = ok && std::abs(g.argmin - kTraceTrace31[i]) <= 1e-3 &&
                 x(i) == kTraceTrace31[i];
            detail += (i ? ", " : "") + std::string("grid ") + show(g.argmin);
        }
        rec.add("trace+trace threshold sigma=(3,1) lambda=2 -> (1,0)", ok, detail);
    }
}

void check_dssim_and_rankreg(Recorder &rec) {
    {
        const double sig[2] = {3.0, 1.0};
        const double l      = 2.0;
        Index best_r = 0;
        double best  = 1e300;
        for (Index r = 0; r <= 2; ++r) {
            double tail = 0.0;
            for (Index i = r; i < 2; ++i)
                tail += sig[i];
            const double obj = tail + l * static_cast<double>(r);
            if (obj < best) {
                best   = obj;
                best_r = r;
            }
        }
        Matrix x = Matrix::Zero(2, 2);
        x.diagonal() << 3.0, 1.0;
        const DssimResult d = dssim(x, l);
        rec.add("dssim sigma=(3,1) lambda=2 -> r=1",
                best_r == kDssimRank31 && d.r == kDssimRank31,
                "enumeration r=" + std::to_string(best_r) + ", dssim r=" + std::to_string(d.r));
    }
    {
        const double sig[3] = {3.0, 2.0, 1.0};
        const double l      = 1.5;
        Index best_k = 0;
        double best  = 1e300;
        for (Index k = 0; k <= 3; ++k) {
            double tail = 0.0;
            for (Index i = k; i < 3; ++i)
                tail += sig[i] * sig[i];
            const double obj = std::sqrt(tail) + l * static_cast<double>(k);
            if (obj < best) {
                best   = obj;
                best_k = k;
            }
        }
        Matrix a = Matrix::Zero(3, 3);
        a.diagonal() << 3.0, 2.0, 1.0;
        const Matrix eye = Matrix::Identity(3, 3);
        const SolveReport r = rank_regularized(a, eye, eye, l, RankRegMode::Frobenius);
        rec.add("rank_regularized diag(3,2,1) lambda=1.5 -> k=1",
                best_k == kRankRegDiag321 && r.chosen_rank == kRankRegDiag321,
                "enumeration k=" + std::to_string(best_k) +
                    ", solver k=" + std::to_string(r.chosen_rank));
    }
}

void check_accuracy(Recorder &rec) {
    const Labels truth{0, 0, 1, 1}, pred{0, 1, 1, 1};
    std::vector<int> perm{0, 1};
    double best = 0.0;
    do {
        int hit = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            hit += perm[static_cast<std::size_t>(pred[i])] == truth[i];
        best = std::max(best, hit / 4.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double got = accuracy(pred, truth);
    rec.add("accuracy (0,0,1,1) vs (0,1,1,1) -> 0.75",
            best == kAccuracyExample && got == kAccuracyExample,
            "enumeration " + show(best) + ", hungarian " + show(got));
}

void check_linalg(Recorder &rec) {
    Rng rng(11);
    const Matrix a = oracle::gaussian(50, 10, rng) * oracle::gaussian(40, 10, rng).transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a.transpose() * a);
    const Vector ev    = eig.eigenvalues();
    const double top   = ev.maxCoeff();
    const Index gram_r = (ev.array() > 1e-12 * top).count(); // coarse relative cutoff on squared singular values
    const Index svd_r  = thin_svd(a).rank();
    rec.add("numerical rank of a 50x40 rank-10 product", gram_r == kGramRank && svd_r == kGramRank,
            "gram " + std::to_string(gram_r) + ", svd " + std::to_string(svd_r));

    const Matrix b  = oracle::gaussian(5, 3, rng);
    const Matrix ne = (b.transpose() * b).inverse() * b.transpose();
    const double d  = (pinv(b) - ne).norm();
    rec.add("pinv matches normal equations", d <= 1e-10, "difference " + show(d));

    const Matrix q = oracle::random_orthonormal(4, 2, rng);
    const Matrix w = orth_complement(q);
    const double e = std::max((q.transpose() * w).norm(),
                              (w.transpose() * w - Matrix::Identity(2, 2)).norm());
    rec.add("orthogonal complement of a random 4x2 frame", w.cols() == 2 && e <= 1e-12,
            "residual " + show(e));
}

void check_sampling(Recorder &rec) {
    {
        Rng rng(21);
        const Matrix a      = oracle::gaussian(6, 5, rng);
        const SolveReport r = eym(a, 2);
        const Matrix best   = a - r.solution;
        int fails           = 0;
        for (int i = 0; i < 200; ++i)
            fails += !ky_fan_dominates(best, Matrix(a - oracle::random_rank_k(6, 5, 2, rng)), 1e-8);
        rec.add("ky fan certificate, 6x5 k=2, 200 draws", fails == 0,
                std::to_string(fails) + " falsifications");
    }
    {
        Rng rng(22);
        const Matrix a      = oracle::gaussian(8, 6, rng);
        const SolveReport r = eym(a, 3);
        const Matrix best   = a - r.solution;
        int fails           = 0;
        for (int i = 0; i < 500; ++i)
            fails += !ky_fan_dominates(best, Matrix(a - oracle::random_rank_k(8, 6, 3, rng)), 1e-8);
        rec.add("eym 8x6 k=3 dominates 500 rank-3 draws", fails == 0,
                std::to_string(fails) + " falsifications");
    }
    {
        Rng rng(23);
        const Matrix a = oracle::gaussian(6, 6, rng);
        const Matrix b = oracle::gaussian(6, 4, rng);
        const Matrix c = oracle::gaussian(3, 6, rng);
        const SolveReport r = gen_eym_frobenius(a, b, c, 2);
        const bool ok = oracle::sample_falsify(
            r.objective,
            [&](Rng &g) { return (a - b * oracle::random_rank_k(4, 3, 2, g) * c).norm(); }, 1000,
            24);
        rec.add("gen_eym_frobenius beats 1000 rank-2 draws", ok, "objective " + show(r.objective));
    }
    {
        Rng rng(25);
        const Matrix a = oracle::gaussian(3, 4, rng);
        const Matrix b = oracle::gaussian(5, 3, rng);
        const Matrix c = oracle::gaussian(4, 6, rng);
        const SolveReport r = eym_bac(a, b, c, 2);
        const Matrix bac    = b * a * c;
        const Matrix best   = bac - b * r.solution * c;
        int fails           = 0;
        for (int i = 0; i < 500; ++i)
            fails += !ky_fan_dominates(best, Matrix(bac - b * oracle::random_rank_k(3, 4, 2, rng) * c),
                                       1e-8);
        rec.add("eym_bac dominates 500 rank-2 draws", fails == 0,
                std::to_string(fails) + " falsifications");
    }
}

void check_sb_grid(Recorder &rec) {
    Rng rng(31);
    const Matrix q1 = oracle::random_orthonormal(4, 2, rng);
    const Matrix q2 = oracle::random_orthonormal(3, 2, rng);
    Eigen::Matrix2d m;
    m << 2.0, 1.0, 0.0, 1.0;
    const Matrix b = q1 * Eigen::Vector2d(2.0, 1.0).asDiagonal();
    const Matrix c = Eigen::Vector2d(3.0, 1.0).asDiagonal() * q2.transpose();
    const Matrix a = q1 * m * q2.transpose();

    // Every rank-1 2x2 Sigma_B X Sigma_C is t u(theta) v(phi)^T; the SB
    // structure reduces the residual to M - that matrix.
    auto inner = [&](double th, double ph) {
        const Eigen::Vector2d u(std::cos(th), std::sin(th));
        const Eigen::Vector2d v(std::cos(ph), std::sin(ph));
        const Eigen::Matrix2d uv = u * v.transpose();
        auto f = [&](double t) {
            const Eigen::Matrix2d r = m - t * uv;
            return std::sqrt(r.squaredNorm() + 2.0 * std::abs(r.determinant()));
        };
        return oracle::grid_minimize(f, GridSpec{-6.0, 6.0, 1e-2, 2}).value;
    };
    const double pi = std::acos(-1.0);
    const auto g    = oracle::grid_minimize(inner, GridSpec{0.0, pi, 2e-2, 1},
                                            GridSpec{0.0, pi, 2e-2, 1});
    const SolveReport r = eym_sb(a, b, c, 1);
    const double solver = evaluate(NormSpec::trace(), Matrix(a - b * r.solution * c));
    const bool ok = std::abs(g.value - kSbTraceOptimum) <= 1e-3 &&
                    std::abs(solver - kSbTraceOptimum) <= 1e-9 && r.certified;
    rec.add("eym_sb trace optimum on a constructed SB instance", ok,
            "grid " + show(g.value) + ", solver " + show(solver) + ", expected " +
                show(kSbTraceOptimum));
}

void check_example2(Recorder &rec) {
    Matrix a(2, 2);
    a << 1.0, 1.0, 1.0, 2.0;
    Matrix b(2, 1), c(1, 2);
    b << 1.0, 0.0;
    c << 1.0, 0.0;
    auto residual = [&](double x) {
        Matrix r = a;
        r(0, 0) -= x;
        return r;
    };
    const GridSpec spec{-5.0, 5.0, 1e-3, 1};
    const auto tr = oracle::grid_minimize([&](double x) { return trace2x2(residual(x)); }, spec);
    const auto fr = oracle::grid_minimize([&](double x) { return residual(x).norm(); }, spec);
    const SolveReport sol = gen_eym_frobenius(a, b, c, 1);
    const double lib_tr   = evaluate(NormSpec::trace(), residual(0.5));
    const bool ok = std::abs(tr.argmin - kEx2TraceArgmin) <= 1e-3 &&
                    std::abs(tr.value - kEx2TraceValue) <= 1e-6 &&
                    std::abs(fr.argmin - kEx2FroArgmin) <= 1e-3 &&
                    std::abs(sol.solution(0, 0) - kEx2FroArgmin) <= 1e-12 &&
                    std::abs(lib_tr - kEx2TraceValue) <= 1e-12;
    rec.add("non-SB counterexample: trace argmin 0.5 vs Frobenius argmin 1", ok,
            "trace grid " + show(tr.argmin) + " value " + show(tr.value) + ", fro grid " +
                show(fr.argmin));
}

void check_min_norm(Recorder &rec) {
    Rng rng(41);
    int bad = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix b  = oracle::random_rank_k(6, 4, 3, rng);
        const Matrix c  = oracle::random_rank_k(3, 5, 2, rng);
        const Matrix x0 = oracle::gaussian(4, 3, rng);
        const Matrix a  = b * x0 * c;
        const SolveReport r = min_norm_exact(a, b, c);
        const Matrix &xs    = r.solution;
        if (xs.norm() > x0.norm() + 1e-12 ||
            evaluate(NormSpec::trace(), xs) > evaluate(NormSpec::trace(), x0) + 1e-8)
            ++bad;
        const Matrix pb = pinv(b) * b, pc = c * pinv(c);
        for (int i = 0; i < 20; ++i) {
            Matrix n = oracle::gaussian(4, 3, rng);
            n -= pb * n * pc;
            n /= n.norm();
            const double gap = (xs + n).squaredNorm() - xs.squaredNorm();
            worst            = std::max(worst, std::abs(gap - 1.0));
            if (gap < 1.0 - 1e-8)
                ++bad;
        }
    }
    rec.add("min-norm exact solution beats generators and null-space moves", bad == 0,
            std::to_string(bad) + " violations, max |gap - 1| " + show(worst));
}

void check_rank_plus_reg(Recorder &rec) {
    Rng rng(51);
    const Matrix a = oracle::gaussian(3, 3, rng);
    const Matrix b = oracle::gaussian(3, 3, rng);
    const Matrix c = oracle::gaussian(3, 3, rng);
    const double l = 1.0;
    // Rank by counting Gram eigenvalues, independent of the solver's SVD.
    auto gram_rank = [](const Matrix &m, double scale) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(m.transpose() * m);
        return static_cast<double>((eig.eigenvalues().array() > 1e-18 * scale * scale).count());
    };
    Eigen::JacobiSVD<Matrix> sb(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::JacobiSVD<Matrix> sc(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix ahat = sb.matrixV().transpose() * a * sc.matrixU();
    Eigen::JacobiSVD<Matrix> sh(ahat, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double scale = (b * a * c).norm();
    double best = 1e300, best_reg = 1e300;
    Index best_r = -1;
    for (Index r = 0; r <= 3; ++r) {
        Vector keep = sh.singularValues();
        keep.tail(3 - r).setZero();
        const Matrix trunc = sh.matrixU() * keep.asDiagonal() * sh.matrixV().transpose();
        const Matrix x     = sb.matrixV() * (ahat - trunc) * sc.matrixU().transpose();
        const double reg   = gram_rank(x, ahat.norm());
        const double obj   = gram_rank(b * a * c - b * x * c, scale) + l * reg;
        if (obj < best - 1e-9 || (std::abs(obj - best) <= 1e-9 && reg < best_reg)) {
            best     = obj;
            best_reg = reg;
            best_r   = r;
        }
    }
    const SolveReport r = rank_plus_reg(a, b, c, l, NormSpec::rank());
    const bool ok = best_r == 3 && best == 3.0 && r.chosen_rank == 3 && r.objective == 3.0;
    rec.add("rank+rank regularized 3x3 enumeration", ok,
            "oracle r=" + std::to_string(best_r) + " obj " + show(best) + ", solver r=" +
                std::to_string(r.chosen_rank) + " obj " + show(r.objective));
}

void check_ssim_descent(Recorder &rec) {
    Rng rng(61);
    const Matrix x = oracle::gaussian(5, 8, rng);
    const double l = 0.5;
    auto f = [&](const Matrix &z) {
        return (x - x * z).squaredNorm() + l * z.squaredNorm();
    };
    auto grad = [&](const Matrix &z) -> Matrix {
        return -2.0 * x.transpose() * (x - x * z) + 2.0 * l * z;
    };
    const Matrix gd = oracle::gradient_descent(f, grad, Matrix::Zero(8, 8));
    const double d  = (gd - ssim(x, l)).cwiseAbs().maxCoeff();
    rec.add("ssim matches gradient descent, lambda=0.5", d <= 1e-5, "max diff " + show(d));
}

void check_blocks(Recorder &rec) {
    Matrix x = Matrix::Zero(3, 8);
    const double scales[4] = {1.0, -2.0, 0.5, 3.0};
    for (int j = 0; j < 4; ++j) {
        x(0, j)     = scales[j];
        x(1, 4 + j) = scales[(j + 1) % 4];
    }
    const Matrix z = sim(x);
    const double off = std::max(z.topRightCorner(4, 4).cwiseAbs().maxCoeff(),
                                z.bottomLeftCorner(4, 4).cwiseAbs().maxCoeff());
    rec.add("sim of two orthogonal lines is block diagonal", off <= 1e-10,
            "max off-block " + show(off));

    Rng rng(71);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix w = Matrix::Zero(10, 10);
    for (int i = 0; i < 10; ++i)
        for (int j = i; j < 10; ++j) {
            const double v = (i < 5) == (j < 5) ? 1.0 : 1e-3 * unit(rng);
            w(i, j) = w(j, i) = v;
        }
    const Labels truth{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const double acc = accuracy(spectral_cluster(w, 2, 5).labels, truth);
    rec.add("spectral clustering recovers two noisy blocks", acc == 1.0,
            "accuracy " + show(acc));
}

void check_trend(Recorder &rec) {
    ExperimentConfig cfg;
    cfg.methods = {Method::Sim};
    cfg.p_grid  = {0.0, 1.0};
    cfg.trials  = 2;
    cfg.threads = 1;
    const BenchResults r = run_bench(cfg);
    double clean = -1.0, noisy = -1.0;
    for (const auto &s : r.summary)
        (s.p == 0.0 ? clean : noisy) = s.mean_accuracy;
    rec.add("sim degrades from p=0 to p=1", clean == 1.0 && noisy < clean,
            "p=0 " + show(clean) + ", p=1 " + show(noisy));
}

} // namespace

std::vector<VerifyCheck> run_verification() {
    Recorder rec;
    check_rules(rec);
    check_dssim_and_rankreg(rec);
    check_accuracy(rec);
    check_linalg(rec);
    check_sampling(rec);
    check_sb_grid(rec);
    check_example2(rec);
    check_min_norm(rec);
    check_rank_plus_reg(rec);
    check_ssim_descent(rec);
    check_blocks(rec);
    check_trend(rec);
    return rec.checks;
}

} // namespace lrsc
