#include "lrsc/datagen.hpp"
#include "lrsc/errors.hpp"
#include "lrsc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace lrsc {

void SynthConfig::validate() const {
    if (num_subspaces < 1 || subspace_dim < 1 || ambient_dim < 1 || points_per < 1)
        throw ConfigError("synth config: all counts must be >= 1");
    if (static_cast<long long>(num_subspaces) * subspace_dim > ambient_dim)
        throw ConfigError("synth config: num_subspaces * subspace_dim exceeds ambient_dim, "
                          "subspaces cannot be independent");
    if (!(corrupt_fraction >= 0.0 && corrupt_fraction <= 1.0))
        throw ConfigError("synth config: corrupt_fraction must lie in [0, 1]");
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
        throw ConfigError("synth config: noise_scale must be non-negative");
}

namespace {

std::string real_text(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

const char *noise_mode_name(NoiseMode m) {
    return m == NoiseMode::Relative ? "relative" : "per_entry";
}

} // namespace

Dataset generate(const SynthConfig &cfg) {
    cfg.validate();
    oracle::Rng rng(cfg.seed);
    const Index D = cfg.ambient_dim, d = cfg.subspace_dim, k = cfg.num_subspaces;
    const Index per = cfg.points_per, N = k * per;

    Matrix bases(D, k * d);
    for (int attempt = 0;; ++attempt) {
        for (Index s = 0; s < k; ++s)
            bases.middleCols(s * d, d) = oracle::random_orthonormal(D, d, rng);
        if (numerical_rank(bases) == k * d)
            break;
        if (attempt > 100)
            throw ConfigError("synth: could not draw independent subspaces");
    }

    Dataset data;
    data.points.resize(D, N);
    Labels labels(static_cast<std::size_t>(N));
    for (Index s = 0; s < k; ++s) {
        const Matrix coef = oracle::gaussian(d, per, rng);
        data.points.middleCols(s * per, per) = bases.middleCols(s * d, d) * coef;
        std::fill_n(labels.begin() + s * per, per, static_cast<int>(s));
    }

    const auto corrupt = static_cast<Index>(std::floor(cfg.corrupt_fraction * static_cast<double>(N) + 1e-9));
    std::vector<Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double per_entry =
        cfg.noise_mode == NoiseMode::Relative ? cfg.noise_scale / std::sqrt(static_cast<double>(D))
                                              : cfg.noise_scale;
    std::vector<Index> chosen(order.begin(), order.begin() + corrupt);
    std::sort(chosen.begin(), chosen.end());
    for (Index j : chosen) {
        const double sd = per_entry * data.points.col(j).norm();
        for (Index i = 0; i < D; ++i)
            data.points(i, j) += sd * normal(rng);
    }

    data.labels = std::move(labels);
    data.meta   = {
        {"num_subspaces", std::to_string(cfg.num_subspaces)},
        {"subspace_dim", std::to_string(cfg.subspace_dim)},
        {"ambient_dim", std::to_string(cfg.ambient_dim)},
        {"points_per", std::to_string(cfg.points_per)},
        {"corrupt_fraction", real_text(cfg.corrupt_fraction)},
        {"corrupted_points", std::to_string(corrupt)},
        {"noise_scale", real_text(cfg.noise_scale)},
        {"noise_mode", noise_mode_name(cfg.noise_mode)},
        {"seed", std::to_string(cfg.seed)},
    };
    return data;
}

std::string format_matrix(const Matrix &m) {
    std::ostringstream os;
    os.precision(17);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j)
                os << ' ';
            os << m(i, j);
        }
        os << '\n';
    }
    return os.str();
}

std::string format_dataset(const Dataset &data) {
    std::ostringstream os;
    os << "lrsc-dataset 1\n";
    os << "dims " << data.points.rows() << ' ' << data.points.cols() << '\n';
    os << "labels " << (data.labels ? 1 : 0) << '\n';
    for (const auto &[key, value] : data.meta)
        os << "meta " << key << '=' << value << '\n';
    os << "points\n" << format_matrix(data.points);
    if (data.labels) {
        os << "labels\n";
        for (std::size_t i = 0; i < data.labels->size(); ++i)
            os << (i ? " " : "") << (*data.labels)[i];
        os << '\n';
    }
    os << "end\n";
    return os.str();
}

namespace {

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw Error("write failed for '" + path.string() + "'");
}

struct LineReader {
    std::istringstream in;
    std::size_t line = 0;

    explicit LineReader(const std::string &text) : in(text) {}

    // Next non-blank line with comments stripped; false at end of input.
    bool next(std::string &out) {
        while (std::getline(in, out)) {
            ++line;
            if (auto hash = out.find('#'); hash != std::string::npos)
                out.erase(hash);
            if (!out.empty() && out.back() == '\r')
                out.pop_back();
            if (out.find_first_not_of(" \t") != std::string::npos)
                return true;
        }
        return false;
    }
};

std::vector<double> parse_reals(const std::string &s, std::size_t line) {
    std::vector<double> row;
    const char *p   = s.c_str();
    const char *end = p + s.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\t' || *p == ','))
            ++p;
        if (p >= end)
            break;
        char *stop     = nullptr;
        const double v = std::strtod(p, &stop);
        if (stop == p)
            throw ParseError("expected a number near '" + std::string(p, std::min<std::size_t>(12, end - p)) + "'", line);
        if (!std::isfinite(v))
            throw ParseError("non-finite value", line);
        row.push_back(v);
        p = stop;
    }
    return row;
}

std::vector<int> parse_ints(const std::string &s, std::size_t line) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            const int v      = std::stoi(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception &) {
            throw ParseError("expected an integer label, got '" + tok + "'", line);
        }
    }
    return out;
}

Matrix parse_rows(LineReader &r, std::string first, std::optional<Index> rows,
                  std::optional<Index> cols) {
    std::vector<std::vector<double>> data;
    std::string line = std::move(first);
    bool have        = !line.empty();
    while (have) {
        auto row = parse_reals(line, r.line);
        if (cols && static_cast<Index>(row.size()) != *cols)
            throw ParseError("expected " + std::to_string(*cols) + " values, found " +
                                 std::to_string(row.size()),
                             r.line);
        if (!data.empty() && row.size() != data.front().size())
            throw ParseError("ragged row: expected " + std::to_string(data.front().size()) +
                                 " values, found " + std::to_string(row.size()),
                             r.line);
        data.push_back(std::move(row));
        if (rows && static_cast<Index>(data.size()) == *rows)
            break;
        have = r.next(line);
    }
    if (rows && static_cast<Index>(data.size()) != *rows)
        throw ParseError("expected " + std::to_string(*rows) + " rows, found " +
                             std::to_string(data.size()),
                         r.line);
    if (data.empty())
        throw ParseError("empty matrix", r.line);
    Matrix m(static_cast<Index>(data.size()), static_cast<Index>(data.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

std::pair<std::string, std::string> split_keyword(const std::string &line) {
    const auto start = line.find_first_not_of(" \t");
    const auto stop  = line.find_first_of(" \t", start);
    std::string head = line.substr(start, stop == std::string::npos ? std::string::npos : stop - start);
    std::string rest;
    if (stop != std::string::npos) {
        const auto body = line.find_first_not_of(" \t", stop);
        if (body != std::string::npos)
            rest = line.substr(body);
        while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t'))
            rest.pop_back();
    }
    return {head, rest};
}

Dataset parse_structured(LineReader &r) {
    Dataset data;
    std::string line;
    Index rows = -1, cols = -1;
    int has_labels = -1;
    for (;;) {
        if (!r.next(line))
            throw ParseError("unexpected end of file in header", r.line);
        auto [key, rest] = split_keyword(line);
        if (key == "dims") {
            std::istringstream is(rest);
            if (!(is >> rows >> cols) || rows < 1 || cols < 1)
                throw ParseError("dims needs two positive integers", r.line);
        } else if (key == "labels") {
            if (rest != "0" && rest != "1")
                throw ParseError("labels must be 0 or 1", r.line);
            has_labels = rest == "1";
        } else if (key == "meta") {
            const auto eq = rest.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError("meta entries must be key=value", r.line);
            data.meta[rest.substr(0, eq)] = rest.substr(eq + 1);
        } else if (key == "points") {
            break;
        } else {
            throw ParseError("unknown header keyword '" + key + "'", r.line);
        }
    }
    if (rows < 0 || has_labels < 0)
        throw ParseError("header must declare dims and labels before points", r.line);
    if (!r.next(line))
        throw ParseError("missing point rows", r.line);
    data.points = parse_rows(r, line, rows, cols);

    if (!r.next(line))
        throw ParseError("missing 'end'", r.line);
    if (has_labels) {
        if (split_keyword(line).first != "labels")
            throw ParseError("expected 'labels' section", r.line);
        if (!r.next(line))
            throw ParseError("missing label line", r.line);
        auto labels = parse_ints(line, r.line);
        if (static_cast<Index>(labels.size()) != cols)
            throw ParseError("label count " + std::to_string(labels.size()) +
                                 " does not match " + std::to_string(cols) + " points",
                             r.line);
        data.labels = std::move(labels);
        if (!r.next(line))
            throw ParseError("missing 'end'", r.line);
    }
    if (split_keyword(line).first != "end")
        throw ParseError("expected 'end'", r.line);
    if (r.next(line))
        throw ParseError("trailing content after 'end'", r.line);
    try {
        data.validate();
    } catch (const InvalidInput &e) {
        throw ParseError(e.what(), 0);
    }
    return data;
}

} // namespace

Matrix parse_matrix(const std::string &text) {
    LineReader r(text);
    std::string first;
    if (!r.next(first))
        throw ParseError("empty matrix file", 0);
    Matrix m = parse_rows(r, first, std::nullopt, std::nullopt);
    return m;
}

Dataset parse_dataset(const std::string &text, const std::string &labels_text) {
    LineReader r(text);
    std::string first;
    if (!r.next(first))
        throw ParseError("empty dataset file", 0);
    if (split_keyword(first).first == "lrsc-dataset") {
        if (split_keyword(first).second != "1")
            throw ParseError("unsupported dataset version", r.line);
        if (!labels_text.empty())
            throw ParseError("sidecar labels are only accepted for plain matrix files", 0);
        return parse_structured(r);
    }
    Dataset data;
    data.points = parse_rows(r, first, std::nullopt, std::nullopt);
    if (!labels_text.empty()) {
        LineReader lr(labels_text);
        Labels labels;
        std::string line;
        while (lr.next(line)) {
            auto vals = parse_ints(line, lr.line);
            if (vals.size() != 1)
                throw ParseError("label files hold one integer per line", lr.line);
            labels.push_back(vals.front());
        }
        if (static_cast<Index>(labels.size()) != data.points.cols())
            throw ParseError("label count " + std::to_string(labels.size()) +
                                 " does not match " + std::to_string(data.points.cols()) +
                                 " points",
                             lr.line);
        data.labels = std::move(labels);
        try {
            data.validate();
        } catch (const InvalidInput &e) {
            throw ParseError(e.what(), 0);
        }
    }
    return data;
}

Dataset load_dataset(const std::filesystem::path &path,
                     const std::optional<std::filesystem::path> &labels_path) {
    return parse_dataset(read_file(path), labels_path ? read_file(*labels_path) : std::string{});
}

void save_dataset(const std::filesystem::path &path, const Dataset &data) {
    data.validate();
    write_file(path, format_dataset(data));
}

Matrix load_matrix(const std::filesystem::path &path) { return parse_matrix(read_file(path)); }

void save_matrix(const std::filesystem::path &path, const Matrix &m) {
    write_file(path, format_matrix(m));
}

} // namespace lrsc
