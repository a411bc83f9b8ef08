#include "lrsc/clustering.hpp"
#include "lrsc/datagen.hpp"
#include "lrsc/errors.hpp"
#include "lrsc/eym.hpp"
#include "lrsc/norms.hpp"
#include "lrsc/prox.hpp"
#include "lrsc/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace lrsc;
using namespace py::literals;

namespace {

py::dict report_dict(const SolveReport &r) {
    py::dict d("solution"_a = r.solution, "objective"_a = r.objective, "unique"_a = r.unique,
               "chosen_rank"_a = r.chosen_rank, "certified"_a = r.certified);
    d["certificate"] = r.certificate ? py::cast(*r.certificate) : py::none();
    return d;
}

Matrix side_or_identity(const std::optional<Matrix> &m, Index n) {
    return m ? *m : Matrix(Matrix::Identity(n, n));
}

Structure parse_structure(const std::string &s) {
    if (s == "plain")
        return Structure::Plain;
    if (s == "self")
        return Structure::SelfExpressive;
    if (s == "general")
        return Structure::GeneralSd;
    throw ConfigError("structure must be plain, self or general, got '" + s + "'");
}

NoiseMode parse_noise_mode(const std::string &s) {
    if (s == "relative")
        return NoiseMode::Relative;
    if (s == "per_entry")
        return NoiseMode::PerEntry;
    throw ConfigError("noise_mode must be relative or per_entry, got '" + s + "'");
}

py::tuple dataset_tuple(const Dataset &d) {
    return py::make_tuple(d.points, d.labels ? py::cast(*d.labels) : py::none(), d.meta);
}

} // namespace

PYBIND11_MODULE(_lrsc, m) {
    m.doc() = "Closed-form low-rank solvers and subspace clustering";

    auto base = py::register_exception<Error>(m, "LrscError", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<AssumptionViolated>(m, "AssumptionViolated", base);
    py::register_exception<Infeasible>(m, "Infeasible", base);
    py::register_exception<NotSupported>(m, "NotSupported", base);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<OracleError>(m, "OracleError", base);

    // linear algebra
    m.def(
        "thin_svd",
        [](const Matrix &a, double tol) {
            const SvdFactors f = thin_svd(a, tol);
            return py::make_tuple(f.u, f.sigma, f.v);
        },
        "a"_a, "rank_tol"_a = kDefaultRankTol);
    m.def("singular_values", &singular_values, "a"_a);
    m.def("numerical_rank", &numerical_rank, "a"_a, "rank_tol"_a = kDefaultRankTol, "scale"_a = 0.0);
    m.def("pinv", py::overload_cast<const Matrix &, double>(&pinv), "a"_a, "rank_tol"_a = kDefaultRankTol);
    m.def(
        "truncate",
        [](const Matrix &a, Index k) {
            const Truncation t = truncate(a, k);
            return py::make_tuple(t.matrix, t.unique);
        },
        "a"_a, "k"_a);

    // norms
    m.def(
        "norm", [](const std::string &spec, const Matrix &a) { return evaluate(NormSpec::parse(spec), a); },
        "spec"_a, "a"_a, "Evaluate a norm spec such as 'trace', 'spec' or 'kp:k=2,p=1'.");
    m.def("ky_fan_dominates", py::overload_cast<const Matrix &, const Matrix &, double>(&ky_fan_dominates),
          "a"_a, "b"_a, "tol"_a = 1e-9);

    // rank-constrained and regularized solvers
    m.def(
        "check_assumptions",
        [](const Matrix &a, const Matrix &b, const Matrix &c, double tol) {
            const AssumptionReport r = check_assumptions(a, b, c, tol);
            return py::dict("sb_holds"_a = r.sb_holds, "sd_holds"_a = r.sd_holds,
                            "sb_residual"_a = r.sb_residual, "sd_residual"_a = r.sd_residual);
        },
        "a"_a, "b"_a, "c"_a, "tol"_a = 1e-8);
    m.def(
        "eym", [](const Matrix &a, Index k) { return report_dict(eym(a, k)); }, "a"_a, "k"_a);
    m.def(
        "gen_eym",
        [](const Matrix &a, const Matrix &b, const Matrix &c, Index k) {
            return report_dict(gen_eym_frobenius(a, b, c, k));
        },
        "a"_a, "b"_a, "c"_a, "k"_a);
    m.def(
        "eym_sb",
        [](const Matrix &a, const Matrix &b, const Matrix &c, Index k, const std::vector<std::string> &panel) {
            std::vector<NormSpec> specs;
            for (const auto &p : panel)
                specs.push_back(NormSpec::parse(p));
            return report_dict(eym_sb(a, b, c, k, specs));
        },
        "a"_a, "b"_a, "c"_a, "k"_a, "panel"_a = std::vector<std::string>{});
    m.def(
        "eym_bac",
        [](const Matrix &a, const Matrix &b, const Matrix &c, Index k) { return report_dict(eym_bac(a, b, c, k)); },
        "a"_a, "b"_a, "c"_a, "k"_a);
    m.def(
        "rank_regularized",
        [](const Matrix &a, const std::optional<Matrix> &b, const std::optional<Matrix> &c, double lambda,
           const std::string &mode, const std::string &loss) {
            RankRegMode md;
            if (mode == "frobenius")
                md = RankRegMode::Frobenius;
            else if (mode == "sb")
                md = RankRegMode::Sb;
            else
                throw ConfigError("mode must be frobenius or sb, got '" + mode + "'");
            return report_dict(rank_regularized(a, side_or_identity(b, a.rows()), side_or_identity(c, a.cols()),
                                                lambda, md, NormSpec::parse(loss)));
        },
        "a"_a, "b"_a = py::none(), "c"_a = py::none(), "lam"_a, "mode"_a = "frobenius", "loss"_a = "fro");
    m.def(
        "rank_plus_reg",
        [](const Matrix &a, const std::optional<Matrix> &b, const std::optional<Matrix> &c, double lambda,
           const std::string &reg) {
            return report_dict(rank_plus_reg(a, side_or_identity(b, a.rows()), side_or_identity(c, a.cols()),
                                             lambda, NormSpec::parse(reg)));
        },
        "a"_a, "b"_a = py::none(), "c"_a = py::none(), "lam"_a, "reg"_a = "trace");
    m.def(
        "min_norm_exact",
        [](const Matrix &a, const Matrix &b, const Matrix &c, double tol) {
            return report_dict(min_norm_exact(a, b, c, tol));
        },
        "a"_a, "b"_a, "c"_a, "tol"_a = 1e-8);
    m.def("svt", &svt, "a"_a, "lam"_a, "rank_tol"_a = kDefaultRankTol);
    m.def(
        "solve_sd",
        [](const Matrix &a, double lambda, const std::string &loss, const std::string &reg,
           const std::string &structure, const std::optional<Matrix> &b, const std::optional<Matrix> &c) {
            const RegularizedProblem p{NormSpec::parse(loss), NormSpec::parse(reg), lambda,
                                       parse_structure(structure)};
            if (b || c)
                return report_dict(solve_sd(p, a, side_or_identity(b, a.rows()), side_or_identity(c, a.cols())));
            return report_dict(solve_sd(p, a));
        },
        "a"_a, "lam"_a, "loss"_a = "fro2", "reg"_a = "trace", "structure"_a = "plain", "b"_a = py::none(),
        "c"_a = py::none());
    m.def(
        "vector_rule",
        [](const std::string &loss, const std::string &reg, const Vector &sigma, const Vector &scale_b,
           const Vector &scale_c, double lambda) {
            return vector_rule(NormSpec::parse(loss), NormSpec::parse(reg), sigma, scale_b, scale_c, lambda);
        },
        "loss"_a, "reg"_a, "sigma"_a, "scale_b"_a, "scale_c"_a, "lam"_a);

    // clustering
    m.def("sim", &sim, "x"_a, "rank_tol"_a = kDefaultRankTol);
    m.def(
        "dssim",
        [](const Matrix &x, double lambda) {
            const DssimResult r = dssim(x, lambda);
            return py::make_tuple(r.z, r.r);
        },
        "x"_a, "lam"_a);
    m.def("cssim", &cssim, "x"_a, "lam"_a, "rank_tol"_a = kDefaultRankTol);
    m.def("ssim", &ssim, "x"_a, "lam"_a, "rank_tol"_a = kDefaultRankTol);
    m.def("affinity", &affinity, "z"_a);
    m.def(
        "spectral_cluster",
        [](const Matrix &w, int k, std::uint64_t seed) {
            const SpectralResult r = spectral_cluster(w, k, seed);
            return py::make_tuple(r.labels, r.degenerate);
        },
        "w"_a, "k"_a, "seed"_a = 0);
    m.def("accuracy", &accuracy, "pred"_a, "truth"_a);
    m.def(
        "cluster",
        [](const Matrix &points, const std::string &method, double lambda, int k, std::uint64_t seed,
           const std::optional<Labels> &labels) {
            Dataset d;
            d.points = points;
            d.labels = labels;
            const ClusterResult r = run_pipeline(d, parse_method(method), lambda, k, seed);
            py::dict out("z"_a = r.z, "affinity"_a = r.affinity, "labels"_a = r.labels,
                         "kept_rank"_a = r.kept_rank, "degenerate"_a = r.degenerate,
                         "reconstruction_seconds"_a = r.reconstruction_seconds);
            out["accuracy"] = r.accuracy ? py::cast(*r.accuracy) : py::none();
            return out;
        },
        "points"_a, "method"_a, "lam"_a, "k"_a, "seed"_a = 0, "labels"_a = py::none());

    // data
    m.def(
        "generate",
        [](int num_subspaces, int subspace_dim, int ambient_dim, int points_per, double corrupt_fraction,
           double noise_scale, const std::string &noise_mode, std::uint64_t seed) {
            SynthConfig cfg;
            cfg.num_subspaces    = num_subspaces;
            cfg.subspace_dim     = subspace_dim;
            cfg.ambient_dim      = ambient_dim;
            cfg.points_per       = points_per;
            cfg.corrupt_fraction = corrupt_fraction;
            cfg.noise_scale      = noise_scale;
            cfg.noise_mode       = parse_noise_mode(noise_mode);
            cfg.seed             = seed;
            return dataset_tuple(generate(cfg));
        },
        "num_subspaces"_a = 5, "subspace_dim"_a = 10, "ambient_dim"_a = 100, "points_per"_a = 40,
        "corrupt_fraction"_a = 0.0, "noise_scale"_a = 0.3, "noise_mode"_a = "relative", "seed"_a = 0,
        "Returns (points, labels, meta).");
    m.def(
        "load_dataset",
        [](const std::filesystem::path &path, const std::optional<std::filesystem::path> &labels) {
            return dataset_tuple(load_dataset(path, labels));
        },
        "path"_a, "labels_path"_a = py::none());
    m.def(
        "save_dataset",
        [](const std::filesystem::path &path, const Matrix &points, const std::optional<Labels> &labels) {
            Dataset d;
            d.points = points;
            d.labels = labels;
            d.validate();
            save_dataset(path, d);
        },
        "path"_a, "points"_a, "labels"_a = py::none());

    m.def(
        "verify",
        [] {
            py::list out;
            for (const auto &c : run_verification())
                out.append(py::make_tuple(c.name, c.passed, c.detail));
            return out;
        },
        "Re-derive the oracle reference values; returns (name, passed, detail) tuples.");
}
