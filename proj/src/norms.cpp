#include "lrsc/norms.hpp"
#include "lrsc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace lrsc {

NormSpec NormSpec::kp(std::optional<Index> k, double p) {
    NormSpec s{Kind::KP, k, p};
    s.validate();
    return s;
}

void NormSpec::validate() const {
    if (kind != Kind::KP)
        return;
    if (!(p >= 1.0))
        throw ConfigError("norm spec: p must be >= 1 or inf");
    if (k && *k < 1)
        throw ConfigError("norm spec: k must be >= 1 or full");
}

bool NormSpec::is_spectral() const noexcept {
    return is_kp() && (std::isinf(p) || (k && *k == 1));
}

bool operator==(const NormSpec &a, const NormSpec &b) {
    if (a.kind != b.kind)
        return false;
    if (a.kind != NormSpec::Kind::KP)
        return true;
    // All p = inf members of the family are the spectral norm.
    if (std::isinf(a.p) && std::isinf(b.p))
        return true;
    return a.k == b.k && a.p == b.p;
}

namespace {

double parse_real(std::string_view s, std::string_view text) {
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v   = std::stod(std::string(s), &used);
        if (used == s.size())
            return v;
    } catch (const std::exception &) {
    }
    throw ConfigError("norm spec '" + std::string(text) + "': bad number '" +
                      std::string(s) + "'");
}

Index parse_count(std::string_view s, std::string_view text) {
    Index v       = 0;
    const auto *e = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), e, v);
    if (ec != std::errc{} || ptr != e)
        throw ConfigError("norm spec '" + std::string(text) + "': bad k '" +
                          std::string(s) + "'");
    return v;
}

} // namespace

NormSpec NormSpec::parse(std::string_view text) {
    if (text == "rank")
        return rank();
    if (text == "fro")
        return frobenius();
    if (text == "fro2")
        return squared_frobenius();
    if (text == "trace")
        return trace();
    if (text == "spec")
        return spectral();
    constexpr std::string_view prefix = "kp:";
    if (text.substr(0, prefix.size()) != prefix)
        throw ConfigError("unknown norm spec '" + std::string(text) + "'");

    std::optional<Index> k;
    std::optional<double> p;
    bool have_k = false;
    std::string_view rest = text.substr(prefix.size());
    while (!rest.empty()) {
        const auto comma     = rest.find(',');
        std::string_view kv  = rest.substr(0, comma);
        rest                 = comma == std::string_view::npos ? "" : rest.substr(comma + 1);
        const auto eq        = kv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("norm spec '" + std::string(text) + "': expected key=value");
        const auto key = kv.substr(0, eq);
        const auto val = kv.substr(eq + 1);
        if (key == "k") {
            have_k = true;
            if (val != "full")
                k = parse_count(val, text);
        } else if (key == "p") {
            p = parse_real(val, text);
        } else {
            throw ConfigError("norm spec '" + std::string(text) + "': unknown key '" +
                              std::string(key) + "'");
        }
    }
    if (!have_k || !p)
        throw ConfigError("norm spec '" + std::string(text) + "': needs both k and p");
    return kp(k, *p);
}

std::string NormSpec::to_string() const {
    switch (kind) {
    case Kind::Rank:
        return "rank";
    case Kind::SquaredFrobenius:
        return "fro2";
    case Kind::KP:
        break;
    }
    if (std::isinf(p))
        return "spec";
    if (!k && p == 1.0)
        return "trace";
    if (!k && p == 2.0)
        return "fro";
    std::ostringstream os;
    os.precision(17);
    os << "kp:k=";
    if (k)
        os << *k;
    else
        os << "full";
    os << ",p=" << p;
    return os.str();
}

double SingularProfile::partial_sum(Index k) const {
    const Index n = std::min<Index>(std::max<Index>(k, 0), values.size());
    return values.head(n).sum();
}

double evaluate(const NormSpec &spec, const SingularProfile &profile,
                const EvalOptions &opts) {
    const Vector &s = profile.values;
    switch (spec.kind) {
    case NormSpec::Kind::Rank: {
        if (s.size() == 0)
            return 0.0;
        const double ref = std::max(s(0), opts.scale);
        if (ref <= 0.0)
            return 0.0;
        return static_cast<double>((s.array() > opts.rank_tol * ref).count());
    }
    case NormSpec::Kind::SquaredFrobenius:
        return s.squaredNorm();
    case NormSpec::Kind::KP:
        break;
    }
    spec.validate();
    const Index n = spec.k ? std::min<Index>(*spec.k, s.size()) : s.size();
    if (n == 0)
        return 0.0;
    if (std::isinf(spec.p))
        return s(0);
    if (spec.p == 1.0)
        return s.head(n).sum();
    if (spec.p == 2.0)
        return s.head(n).norm();
    // Scale by sigma_1 before raising to p to avoid overflow.
    const double top = s(0);
    if (top == 0.0)
        return 0.0;
    const double sum = (s.head(n).array() / top).pow(spec.p).sum();
    return top * std::pow(sum, 1.0 / spec.p);
}

double evaluate(const NormSpec &spec, const Matrix &a, const EvalOptions &opts) {
    require_finite(a, "evaluate");
    return evaluate(spec, SingularProfile::of(a), opts);
}

bool ky_fan_dominates(const SingularProfile &a, const SingularProfile &b, double tol) {
    const Index n = std::max(a.values.size(), b.values.size());
    double sa = 0.0, sb = 0.0;
    for (Index i = 0; i < n; ++i) {
        sa += i < a.values.size() ? a.values(i) : 0.0;
        sb += i < b.values.size() ? b.values(i) : 0.0;
        if (sa > sb + tol + tol * std::max(sa, sb))
            return false;
    }
    return true;
}

bool ky_fan_dominates(const Matrix &a, const Matrix &b, double tol) {
    require_finite(a, "ky_fan_dominates");
    require_finite(b, "ky_fan_dominates");
    return ky_fan_dominates(SingularProfile::of(a), SingularProfile::of(b), tol);
}

} // namespace lrsc
