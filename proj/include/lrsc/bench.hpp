#pragma once

#include "lrsc/clustering.hpp"
#include "lrsc/datagen.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lrsc {

/// Synthetic sweep over (method, corruption fraction, lambda, trial).
struct ExperimentConfig {
    std::vector<Method> methods{Method::Sim, Method::Dssim, Method::Cssim, Method::Ssim};
    std::vector<double> lambda_grid; ///< default 10^-4 .. 10^4
    std::vector<double> p_grid;      ///< default 0, 0.1, ..., 1
    int trials         = 10;
    std::uint64_t seed = 1;
    /// Worker threads; 0 means LRSC_THREADS or the hardware concurrency.
    int threads = 0;
    SynthConfig synth;

    ExperimentConfig();
    void validate() const;
};

/// Parses a sectioned key=value file:
///
///     [experiment]
///     methods = sim, dssim, cssim, ssim
///     lambdas = 1e-4, 1e-2, 1
///     p = 0, 0.5, 1
///     trials = 10
///     seed = 1
///     threads = 0
///     [synth]
///     num_subspaces = 5
///     subspace_dim = 10
///     ambient_dim = 100
///     points_per = 40
///     noise_scale = 0.3
///     noise_mode = relative | per_entry
///
/// Omitted keys keep their defaults. Errors are ParseError with the line.
ExperimentConfig parse_experiment_config(const std::string &text);
ExperimentConfig load_experiment_config(const std::filesystem::path &path);

struct BenchRow {
    Method method;
    double p;
    double lambda; ///< 0 for SIM
    int trial;
    double accuracy;
    Index kept_rank;
    double seconds; ///< reconstruction time, not part of the deterministic output
};

struct BenchSummaryRow {
    Method method;
    double p;
    double best_lambda;
    double mean_accuracy;
};

struct BenchResults {
    std::vector<BenchRow> rows;          ///< sorted by method, p, lambda, trial
    std::vector<BenchSummaryRow> summary; ///< sorted by method, p
};

/// Seed of the dataset for a trial; shared by every p so the corruption
/// levels see the same subspaces and points.
std::uint64_t trial_seed(std::uint64_t base, int trial);

/// Runs the sweep on a worker pool. Output order does not depend on the
/// thread count. The best lambda per (method, p) maximizes the mean accuracy
/// over trials, ties to the smaller lambda.
BenchResults run_bench(const ExperimentConfig &config);

/// `method,p,lambda,trial,accuracy,kept_rank`
std::string results_csv(const BenchResults &r);
/// `method,p,lambda,trial,seconds`
std::string timing_csv(const BenchResults &r);
/// `method,p,best_lambda,mean_accuracy`
std::string summary_csv(const BenchResults &r);
/// Tidy plot data: `method,p,mean_accuracy`
std::string plot_csv(const BenchResults &r);

/// Writes results.csv, summary.csv, plot.csv and timing.csv under dir.
void write_bench_outputs(const std::filesystem::path &dir, const BenchResults &r);

/// Shortest round-trip decimal text.
std::string format_real(double v);

int default_thread_count();

} // namespace lrsc
