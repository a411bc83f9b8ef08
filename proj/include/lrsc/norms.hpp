#pragma once

#include "lrsc/linalg.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace lrsc {

/// A unitarily invariant norm from the (k, p) family, the rank function, or
/// the squared Frobenius norm used as a smooth loss.
///
/// KP(k, p) evaluates (sum_{i<=k} sigma_i^p)^{1/p}; k = nullopt means all
/// singular values (Schatten p). p = infinity gives the spectral norm.
struct NormSpec {
    enum class Kind { KP, Rank, SquaredFrobenius };

    Kind kind = Kind::KP;
    std::optional<Index> k; ///< nullopt: full spectrum
    double p = 1.0;

    static NormSpec kp(std::optional<Index> k, double p);
    static NormSpec trace() { return kp(std::nullopt, 1.0); }
    static NormSpec frobenius() { return kp(std::nullopt, 2.0); }
    static NormSpec spectral() { return kp(1, std::numeric_limits<double>::infinity()); }
    static NormSpec ky_fan(Index k) { return kp(k, 1.0); }
    static NormSpec rank() { return {Kind::Rank, std::nullopt, 0.0}; }
    static NormSpec squared_frobenius() { return {Kind::SquaredFrobenius, std::nullopt, 2.0}; }

    /// Parses `rank`, `fro`, `fro2`, `trace`, `spec`, or `kp:k=K,p=P` where K
    /// may be `full` and P may be `inf`. Throws ConfigError.
    static NormSpec parse(std::string_view text);

    /// Canonical text form; parse(to_string()) == *this.
    std::string to_string() const;

    /// Throws ConfigError unless p >= 1 and k >= 1.
    void validate() const;

    bool is_kp() const noexcept { return kind == Kind::KP; }
    bool is_trace() const noexcept { return is_kp() && !k && p == 1.0; }
    bool is_frobenius() const noexcept { return is_kp() && !k && p == 2.0; }
    bool is_spectral() const noexcept;

    friend bool operator==(const NormSpec &, const NormSpec &);
};

/// Full singular spectrum, non-increasing, zeros kept up to min(m, n).
struct SingularProfile {
    Vector values;

    static SingularProfile of(const Matrix &a) { return {singular_values(a)}; }
    /// Sum of the k largest values; k beyond the length sums everything.
    double partial_sum(Index k) const;
};

struct EvalOptions {
    double rank_tol = kDefaultRankTol;
    /// Absolute reference for the rank cutoff (see numerical_rank).
    double scale = 0.0;
};

double evaluate(const NormSpec &spec, const SingularProfile &profile,
                const EvalOptions &opts = {});
double evaluate(const NormSpec &spec, const Matrix &a, const EvalOptions &opts = {});

/// True iff every Ky Fan partial sum of a is at most the matching partial sum
/// of b, up to tol absolute plus tol relative to the larger sum. Spectra of
/// different lengths are zero-padded. A true result implies ||a|| <= ||b||
/// for every unitarily invariant norm.
bool ky_fan_dominates(const SingularProfile &a, const SingularProfile &b,
                      double tol = 1e-9);
bool ky_fan_dominates(const Matrix &a, const Matrix &b, double tol = 1e-9);

} // namespace lrsc
