#include "lrsc/prox.hpp"
#include "lrsc/errors.hpp"

#include <cmath>
#include <string>

namespace lrsc {

namespace {

enum class Rule { Fro2Trace, Fro2Fro2, TraceTrace };

std::optional<Rule> rule_for(const NormSpec &loss, const NormSpec &reg) {
    const bool fro2 = loss.kind == NormSpec::Kind::SquaredFrobenius;
    if (fro2 && reg.is_trace())
        return Rule::Fro2Trace;
    if (fro2 && reg.kind == NormSpec::Kind::SquaredFrobenius)
        return Rule::Fro2Fro2;
    if (loss.is_trace() && reg.is_trace())
        return Rule::TraceTrace;
    return std::nullopt;
}

Rule require_rule(const NormSpec &loss, const NormSpec &reg) {
    auto r = rule_for(loss, reg);
    if (!r)
        throw NotSupported("no closed-form rule for loss '" + loss.to_string() +
                           "' with regularizer '" + reg.to_string() +
                           "'; supported: (fro2, trace), (fro2, fro2), (trace, trace)");
    return *r;
}

double component(Rule rule, double sigma, double s, double lambda) {
    switch (rule) {
    case Rule::Fro2Trace:
        return std::max(0.0, sigma / s - lambda / (2.0 * s * s));
    case Rule::Fro2Fro2:
        return s * sigma / (s * s + lambda);
    case Rule::TraceTrace:
        return s > lambda ? sigma / s : 0.0;
    }
    return 0.0;
}

void require_lambda(double lambda, const char *who) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidInput(std::string(who) + ": lambda must be positive and finite");
}

Matrix plain_shrink(const SvdFactors &f, const Vector &x) {
    return f.u * x.asDiagonal() * f.v.transpose();
}

double objective(const RegularizedProblem &p, const Matrix &residual, const Matrix &x) {
    return evaluate(p.loss, residual) + p.lambda * evaluate(p.reg, x);
}

bool near(const Matrix &a, const Matrix &b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a - b).norm() <= tol * (1.0 + b.norm());
}

bool near_identity(const Matrix &a, double tol) {
    return a.rows() == a.cols() && near(a, Matrix::Identity(a.rows(), a.cols()), tol);
}

SolveReport solve_general(const RegularizedProblem &p, const Matrix &a, const Matrix &b,
                          const Matrix &c, const SolverOptions &opts) {
    const Rule rule = require_rule(p.loss, p.reg);
    const AssumptionReport as =
        check_assumptions(a, b, c, opts.assumption_tol, opts.rank_tol);
    if (!as.sd_holds) {
        const double res = as.sb_holds ? as.sd_residual : as.sb_residual;
        throw AssumptionViolated("solve_sd: SD assumption violated, relative residual " +
                                     std::to_string(res),
                                 res);
    }
    const SvdFactors fb = thin_svd(b, opts.rank_tol);
    const SvdFactors fc = thin_svd(c, opts.rank_tol);
    const Matrix ahat   = fb.u.transpose() * a * fc.v;
    const Index d       = std::min(fb.rank(), fc.rank());

    Matrix sigma_x = Matrix::Zero(fb.rank(), fc.rank());
    for (Index i = 0; i < d; ++i) {
        // The regularizer sees only |x|, so solve on |a_i| and restore the sign.
        const double ai = ahat(i, i);
        const double s  = fb.sigma(i) * fc.sigma(i);
        sigma_x(i, i)   = std::copysign(component(rule, std::abs(ai), s, p.lambda), ai);
    }
    SolveReport r;
    r.solution    = fb.v * sigma_x * fc.u.transpose();
    r.objective   = objective(p, a - b * r.solution * c, r.solution);
    r.chosen_rank = (sigma_x.diagonal().array() != 0.0).count();
    return r;
}

} // namespace

bool pair_supported(const NormSpec &loss, const NormSpec &reg) {
    return rule_for(loss, reg).has_value();
}

void RegularizedProblem::validate() const {
    require_lambda(lambda, "regularized problem");
    require_rule(loss, reg);
}

Vector vector_rule(const NormSpec &loss, const NormSpec &reg, const Vector &sigma,
                   const Vector &scale_b, const Vector &scale_c, double lambda) {
    const Rule rule = require_rule(loss, reg);
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidInput("vector_rule: lambda must be non-negative and finite");
    if (scale_b.size() != sigma.size() || scale_c.size() != sigma.size())
        throw InvalidInput("vector_rule: scale vectors must match sigma in length");
    if ((sigma.array() < 0.0).any())
        throw InvalidInput("vector_rule: sigma must be non-negative");
    if ((scale_b.array() <= 0.0).any() || (scale_c.array() <= 0.0).any())
        throw InvalidInput("vector_rule: scales must be positive");
    Vector x(sigma.size());
    for (Index i = 0; i < sigma.size(); ++i)
        x(i) = component(rule, sigma(i), scale_b(i) * scale_c(i), lambda);
    return x;
}

SolveReport solve_sd(const RegularizedProblem &p, const Matrix &a,
                     const SolverOptions &opts) {
    p.validate();
    require_finite(a, "solve_sd");
    const SvdFactors f = thin_svd(a, opts.rank_tol);
    const Vector ones  = Vector::Ones(f.rank());
    SolveReport r;
    switch (p.structure) {
    case Structure::Plain: {
        const Vector x = vector_rule(p.loss, p.reg, f.sigma, ones, ones, p.lambda);
        r.solution     = plain_shrink(f, x);
        r.objective    = objective(p, a - r.solution, r.solution);
        r.chosen_rank  = (x.array() > 0.0).count();
        return r;
    }
    case Structure::SelfExpressive: {
        const Vector x = vector_rule(p.loss, p.reg, f.sigma, f.sigma, ones, p.lambda);
        r.solution     = f.v * x.asDiagonal() * f.v.transpose();
        r.objective    = objective(p, a - a * r.solution, r.solution);
        r.chosen_rank  = (x.array() > 0.0).count();
        return r;
    }
    case Structure::GeneralSd:
        break;
    }
    return solve_general(p, a, Matrix::Identity(a.rows(), a.rows()),
                         Matrix::Identity(a.cols(), a.cols()), opts);
}

SolveReport solve_sd(const RegularizedProblem &p, const Matrix &a, const Matrix &b,
                     const Matrix &c, const SolverOptions &opts) {
    p.validate();
    require_finite(a, "solve_sd");
    require_finite(b, "solve_sd");
    require_finite(c, "solve_sd");
    switch (p.structure) {
    case Structure::Plain:
        if (!near_identity(b, opts.assumption_tol) || !near_identity(c, opts.assumption_tol) ||
            b.rows() != a.rows() || c.cols() != a.cols())
            throw InvalidInput("solve_sd: plain structure requires B = I and C = I");
        return solve_sd(p, a, opts);
    case Structure::SelfExpressive:
        if (!near(b, a, opts.assumption_tol) || !near_identity(c, opts.assumption_tol) ||
            c.cols() != a.cols())
            throw InvalidInput("solve_sd: self-expressive structure requires B = A and C = I");
        return solve_sd(p, a, opts);
    case Structure::GeneralSd:
        break;
    }
    if (b.rows() != a.rows() || c.cols() != a.cols())
        throw InvalidInput("solve_sd: shape mismatch, need B rows = A rows and C cols = A cols");
    return solve_general(p, a, b, c, opts);
}

Matrix svt(const Matrix &a, double lambda, double rank_tol) {
    require_lambda(lambda, "svt");
    require_finite(a, "svt");
    const SvdFactors f = thin_svd(a, rank_tol);
    const Vector ones  = Vector::Ones(f.rank());
    return plain_shrink(f, vector_rule(NormSpec::squared_frobenius(), NormSpec::trace(),
                                       f.sigma, ones, ones, lambda));
}

} // namespace lrsc
