#pragma once

#include "lrsc/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace lrsc {

/// How the corruption standard deviation relates to the point length.
enum class NoiseMode {
    /// Per-entry std = noise_scale * ||x|| / sqrt(D); expected noise norm is
    /// about noise_scale * ||x||.
    Relative,
    /// Per-entry std = noise_scale * ||x||.
    PerEntry,
};

struct SynthConfig {
    int num_subspaces        = 5;
    int subspace_dim         = 10;
    int ambient_dim          = 100;
    int points_per           = 40;
    double corrupt_fraction  = 0.0;
    double noise_scale       = 0.3;
    NoiseMode noise_mode     = NoiseMode::Relative;
    std::uint64_t seed       = 0;

    /// Throws ConfigError on violated invariants (counts >= 1,
    /// num_subspaces * subspace_dim <= ambient_dim, fraction in [0, 1]).
    void validate() const;
};

/// Union of independent random subspaces: orthonormalized Gaussian bases
/// (redrawn until the stacked basis has full column rank), Gaussian
/// coefficients, and floor(p * N) uniformly chosen points corrupted with
/// zero-mean Gaussian noise. Columns are grouped by subspace. Fully
/// determined by the seed.
Dataset generate(const SynthConfig &config);

/// Self-describing text format:
///
///     lrsc-dataset 1
///     dims <D> <N>
///     labels <0|1>
///     meta <key>=<value>        (any number)
///     points
///     <D lines of N values>
///     labels                    (only when labels 1)
///     <N integers on one line>
///     end
///
/// Values are written with 17 significant digits so the round trip is exact.
void save_dataset(const std::filesystem::path &path, const Dataset &data);
std::string format_dataset(const Dataset &data);

/// Reads the format above, or a plain headerless matrix of D rows by N
/// columns. For plain files, labels_path (one integer per line) supplies
/// labels. Throws ParseError with the offending line.
Dataset load_dataset(const std::filesystem::path &path,
                     const std::optional<std::filesystem::path> &labels_path = std::nullopt);
Dataset parse_dataset(const std::string &text, const std::string &labels_text = {});

/// Plain whitespace-separated matrix, one row per line; `#` starts a comment.
Matrix load_matrix(const std::filesystem::path &path);
Matrix parse_matrix(const std::string &text);
void save_matrix(const std::filesystem::path &path, const Matrix &m);
std::string format_matrix(const Matrix &m);

} // namespace lrsc
