// lrsc: command-line front end for the closed-form low-rank solvers and the
// subspace clustering pipeline.
//
// Exit codes:
//   0 success
//   1 other error (I/O, invalid input)
//   2 usage error
//   3 structural assumption (SB/SD) violated
//   4 exact constraint infeasible
//   5 unsupported (loss, regularizer) pair or option combination
//   6 malformed input or config file
//   7 verification mismatch

#include "lrsc/bench.hpp"
#include "lrsc/clustering.hpp"
#include "lrsc/datagen.hpp"
#include "lrsc/errors.hpp"
#include "lrsc/eym.hpp"
#include "lrsc/norms.hpp"
#include "lrsc/prox.hpp"
#include "lrsc/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace lrsc;

enum Exit : int {
    kOk          = 0,
    kError       = 1,
    kUsage       = 2,
    kAssumption  = 3,
    kInfeasible  = 4,
    kUnsupported = 5,
    kParse       = 6,
    kMismatch    = 7,
};

json matrix_json(const Matrix &m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

struct SolveArgs {
    std::string selector;
    std::string a_path, b_path, c_path;
    Index k = 0;
    bool have_k = false;
    double lambda = 0.0;
    bool have_lambda = false;
    std::string loss = "fro";
    std::string reg  = "trace";
    std::vector<std::string> panel;
    std::string mode      = "frobenius";
    std::string structure = "plain";
    double tol            = 1e-8;
    std::string out;
};

struct ClusterArgs {
    std::string dataset;
    std::string labels;
    std::string method = "sim";
    double lambda      = 0.0;
    int k              = 0;
    std::uint64_t seed = 0;
    std::string affinity_out;
};

struct SynthArgs {
    SynthConfig cfg;
    std::string noise_mode = "relative";
    std::string out;
};

struct BenchArgs {
    std::string config;
    std::string out;
    int threads = -1;
};

int run_solve(const SolveArgs &s) {
    if (s.a_path.empty())
        throw CLI::ValidationError("--a", "matrix A is required");
    const Matrix a = load_matrix(s.a_path);
    auto side = [&](const std::string &path, Index n) {
        return path.empty() ? Matrix(Matrix::Identity(n, n)) : load_matrix(path);
    };
    auto need_k = [&] {
        if (!s.have_k)
            throw CLI::ValidationError("-k", "selector '" + s.selector + "' needs -k");
        return s.k;
    };
    auto need_lambda = [&] {
        if (!s.have_lambda)
            throw CLI::ValidationError("--lambda",
                                       "selector '" + s.selector + "' needs --lambda");
        return s.lambda;
    };

    SolveReport rep;
    std::optional<AssumptionReport> assumptions;
    const std::string &sel = s.selector;
    if (sel == "eym") {
        rep = eym(a, need_k());
    } else if (sel == "gen-eym" || sel == "eym-sb" || sel == "rank-reg" || sel == "min-norm") {
        const Matrix b = side(s.b_path, a.rows());
        const Matrix c = side(s.c_path, a.cols());
        if (sel == "gen-eym") {
            rep = gen_eym_frobenius(a, b, c, need_k());
        } else if (sel == "eym-sb") {
            std::vector<NormSpec> panel;
            for (const auto &p : s.panel)
                panel.push_back(NormSpec::parse(p));
            rep = eym_sb(a, b, c, need_k(), panel);
        } else if (sel == "rank-reg") {
            RankRegMode mode;
            if (s.mode == "frobenius")
                mode = RankRegMode::Frobenius;
            else if (s.mode == "sb")
                mode = RankRegMode::Sb;
            else
                throw CLI::ValidationError("--mode", "must be frobenius or sb");
            rep = rank_regularized(a, b, c, need_lambda(), mode, NormSpec::parse(s.loss));
        } else {
            rep = min_norm_exact(a, b, c, s.tol);
        }
        assumptions = check_assumptions(a, b, c);
    } else if (sel == "bac" || sel == "rank-plus-reg") {
        const Matrix b = side(s.b_path, a.rows());
        const Matrix c = side(s.c_path, a.cols());
        rep = sel == "bac" ? eym_bac(a, b, c, need_k())
                           : rank_plus_reg(a, b, c, need_lambda(), NormSpec::parse(s.reg));
    } else if (sel == "svt") {
        rep.solution    = svt(a, need_lambda());
        rep.objective   = evaluate(NormSpec::squared_frobenius(), Matrix(a - rep.solution)) +
                        s.lambda * evaluate(NormSpec::trace(), rep.solution);
        rep.chosen_rank = rep.solution.size() ? numerical_rank(rep.solution) : 0;
    } else if (sel == "sd-reg") {
        RegularizedProblem prob;
        prob.loss   = NormSpec::parse(s.loss);
        prob.reg    = NormSpec::parse(s.reg);
        prob.lambda = need_lambda();
        if (s.structure == "plain")
            prob.structure = Structure::Plain;
        else if (s.structure == "self")
            prob.structure = Structure::SelfExpressive;
        else if (s.structure == "general")
            prob.structure = Structure::GeneralSd;
        else
            throw CLI::ValidationError("--structure", "must be plain, self or general");
        if (prob.structure == Structure::GeneralSd) {
            const Matrix b = side(s.b_path, a.rows());
            const Matrix c = side(s.c_path, a.cols());
            rep = solve_sd(prob, a, b, c);
        } else {
            rep = solve_sd(prob, a);
        }
    } else {
        throw CLI::ValidationError("selector", "unknown solver '" + sel + "'");
    }

    json out = {
        {"solver", sel},
        {"objective", rep.objective},
        {"unique", rep.unique},
        {"chosen_rank", rep.chosen_rank},
        {"certified", rep.certified},
        {"rows", rep.solution.rows()},
        {"cols", rep.solution.cols()},
        {"solution", matrix_json(rep.solution)},
    };
    if (rep.certificate)
        out["certificate"] = *rep.certificate;
    if (assumptions)
        out["assumptions"] = {{"sb_holds", assumptions->sb_holds},
                              {"sd_holds", assumptions->sd_holds},
                              {"sb_residual", assumptions->sb_residual},
                              {"sd_residual", assumptions->sd_residual}};
    if (!s.out.empty())
        save_matrix(s.out, rep.solution);
    std::cout << out.dump(2) << '\n';
    return kOk;
}

int run_cluster(const ClusterArgs &c) {
    const Dataset data = load_dataset(
        c.dataset, c.labels.empty() ? std::nullopt : std::optional<std::filesystem::path>(c.labels));
    const Method m = parse_method(c.method);
    int k          = c.k;
    if (k <= 0) {
        k = data.num_classes();
        if (k <= 0)
            throw CLI::ValidationError("-k", "number of clusters needed when the data has no labels");
    }
    const ClusterResult res = run_pipeline(data, m, c.lambda, k, c.seed);
    json out = {
        {"method", std::string(method_name(res.method))},
        {"lambda", res.lambda_or_r},
        {"k", k},
        {"points", data.size()},
        {"kept_rank", res.kept_rank},
        {"degenerate", res.degenerate},
        {"reconstruction_seconds", res.reconstruction_seconds},
        {"labels", res.labels},
    };
    if (res.accuracy)
        out["accuracy"] = *res.accuracy;
    if (!c.affinity_out.empty())
        save_matrix(c.affinity_out, res.affinity);
    std::cout << out.dump(2) << '\n';
    return kOk;
}

int run_synth(SynthArgs s) {
    if (s.noise_mode == "relative")
        s.cfg.noise_mode = NoiseMode::Relative;
    else if (s.noise_mode == "per_entry")
        s.cfg.noise_mode = NoiseMode::PerEntry;
    else
        throw CLI::ValidationError("--noise-mode", "must be relative or per_entry");
    const Dataset data = generate(s.cfg);
    save_dataset(s.out, data);
    std::cout << json{{"path", s.out},
                      {"rows", data.points.rows()},
                      {"cols", data.points.cols()},
                      {"corrupted_points", data.meta.at("corrupted_points")}}
                     .dump()
              << '\n';
    return kOk;
}

int run_bench_cmd(const BenchArgs &b) {
    ExperimentConfig cfg = b.config.empty() ? ExperimentConfig{} : load_experiment_config(b.config);
    if (b.threads >= 0)
        cfg.threads = b.threads;
    const BenchResults res = run_bench(cfg);
    write_bench_outputs(b.out, res);
    std::cout << summary_csv(res);
    return kOk;
}

int run_verify() {
    bool all = true;
    for (const auto &c : run_verification()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.passed;
    }
    return all ? kOk : kMismatch;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Closed-form low-rank solvers and subspace clustering"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto *cmd_synth = app.add_subcommand("synth", "Generate a union-of-subspaces dataset");
    cmd_synth->add_option("--subspaces", synth.cfg.num_subspaces, "Number of subspaces");
    cmd_synth->add_option("--dim", synth.cfg.subspace_dim, "Subspace dimension");
    cmd_synth->add_option("--ambient", synth.cfg.ambient_dim, "Ambient dimension");
    cmd_synth->add_option("--per", synth.cfg.points_per, "Points per subspace");
    cmd_synth->add_option("-p,--corrupt", synth.cfg.corrupt_fraction, "Fraction of corrupted points");
    cmd_synth->add_option("--noise", synth.cfg.noise_scale, "Noise scale relative to point length");
    cmd_synth->add_option("--noise-mode", synth.noise_mode, "relative | per_entry");
    cmd_synth->add_option("--seed", synth.cfg.seed, "Random seed");
    cmd_synth->add_option("-o,--out", synth.out, "Output dataset file")->required();

    SolveArgs solve;
    auto *cmd_solve = app.add_subcommand("solve", "Run a closed-form solver on matrix files");
    cmd_solve
        ->add_option("selector", solve.selector,
                     "eym | gen-eym | eym-sb | bac | rank-reg | rank-plus-reg | min-norm | svt | sd-reg")
        ->required();
    cmd_solve->add_option("--a", solve.a_path, "Matrix A")->required();
    cmd_solve->add_option("--b", solve.b_path, "Matrix B (identity when omitted)");
    cmd_solve->add_option("--c", solve.c_path, "Matrix C (identity when omitted)");
    cmd_solve->add_option("-k", solve.k, "Rank constraint")->each([&](const std::string &) {
        solve.have_k = true;
    });
    cmd_solve->add_option("--lambda", solve.lambda, "Regularization weight")
        ->each([&](const std::string &) { solve.have_lambda = true; });
    cmd_solve->add_option("--loss", solve.loss, "Loss norm spec (rank-reg, sd-reg)");
    cmd_solve->add_option("--reg", solve.reg, "Regularizer norm spec (rank-plus-reg, sd-reg)");
    cmd_solve->add_option("--panel", solve.panel, "Certification norms (eym-sb)");
    cmd_solve->add_option("--mode", solve.mode, "frobenius | sb (rank-reg)");
    cmd_solve->add_option("--structure", solve.structure, "plain | self | general (sd-reg)");
    cmd_solve->add_option("--tol", solve.tol, "Feasibility tolerance (min-norm)");
    cmd_solve->add_option("-o,--out", solve.out, "Write the solution matrix here");

    ClusterArgs cluster;
    auto *cmd_cluster = app.add_subcommand("cluster", "Cluster a dataset file");
    cmd_cluster->add_option("dataset", cluster.dataset, "Dataset or plain matrix file")->required();
    cmd_cluster->add_option("--labels", cluster.labels, "Sidecar label file for plain matrices");
    cmd_cluster->add_option("--method", cluster.method, "sim | dssim | cssim | ssim");
    cmd_cluster->add_option("--lambda", cluster.lambda, "Regularization weight");
    cmd_cluster->add_option("-k", cluster.k, "Number of clusters (default: from labels)");
    cmd_cluster->add_option("--seed", cluster.seed, "k-means seed");
    cmd_cluster->add_option("--affinity-out", cluster.affinity_out, "Write the affinity matrix here");

    BenchArgs bench;
    auto *cmd_bench = app.add_subcommand("bench", "Run the synthetic corruption sweep");
    cmd_bench->add_option("--config", bench.config, "Experiment config file");
    cmd_bench->add_option("-o,--out", bench.out, "Output directory")->required();
    cmd_bench->add_option("--threads", bench.threads, "Worker threads (default LRSC_THREADS)");

    auto *cmd_verify = app.add_subcommand("verify", "Re-derive reference values with the oracles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*cmd_synth)
            return run_synth(synth);
        if (*cmd_solve)
            return run_solve(solve);
        if (*cmd_cluster)
            return run_cluster(cluster);
        if (*cmd_bench)
            return run_bench_cmd(bench);
        if (*cmd_verify)
            return run_verify();
    } catch (const CLI::Error &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const AssumptionViolated &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAssumption;
    } catch (const Infeasible &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const NotSupported &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnsupported;
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const ConfigError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    }
    return kUsage;
}
