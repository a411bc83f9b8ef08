#include "lrsc/bench.hpp"
#include "lrsc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace lrsc {

ExperimentConfig::ExperimentConfig() {
    for (int i = -4; i <= 4; ++i)
        lambda_grid.push_back(std::pow(10.0, i));
    for (int i = 0; i <= 10; ++i)
        p_grid.push_back(i / 10.0);
}

void ExperimentConfig::validate() const {
    if (methods.empty() || lambda_grid.empty() || p_grid.empty())
        throw ConfigError("experiment: methods, lambdas and p must be non-empty");
    if (trials < 1)
        throw ConfigError("experiment: trials must be >= 1");
    if (threads < 0)
        throw ConfigError("experiment: threads must be >= 0");
    for (double l : lambda_grid)
        if (!(l > 0.0) || !std::isfinite(l))
            throw ConfigError("experiment: lambdas must be positive");
    for (double p : p_grid)
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError("experiment: p values must lie in [0, 1]");
    synth.validate();
}

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

double to_real(const std::string &s, std::size_t line) {
    double v   = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("expected a number, got '" + s + "'", line);
    return v;
}

long long to_int(const std::string &s, std::size_t line) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("expected an integer, got '" + s + "'", line);
    return v;
}

int to_count(const std::string &s, std::size_t line) {
    const long long v = to_int(s, line);
    if (v < 0 || v > 1'000'000'000)
        throw ParseError("count out of range: '" + s + "'", line);
    return static_cast<int>(v);
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string &text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find_first_of("#;"); hash != std::string::npos)
            raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty())
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section != "experiment" && section != "synth")
                throw ParseError("unknown section [" + section + "]", line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value", line);
        if (section.empty())
            throw ParseError("key outside of a section", line);
        const std::string key   = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        try {
            if (section == "experiment") {
                if (key == "methods") {
                    cfg.methods.clear();
                    for (const auto &m : split_list(value))
                        cfg.methods.push_back(parse_method(m));
                } else if (key == "lambdas") {
                    cfg.lambda_grid.clear();
                    for (const auto &v : split_list(value))
                        cfg.lambda_grid.push_back(to_real(v, line));
                } else if (key == "p") {
                    cfg.p_grid.clear();
                    for (const auto &v : split_list(value)) {
                        const double p = to_real(v, line);
                        if (p < 0.0 || p > 1.0)
                            throw ParseError("corruption fraction " + v + " outside [0, 1]", line);
                        cfg.p_grid.push_back(p);
                    }
                } else if (key == "trials") {
                    cfg.trials = to_count(value, line);
                } else if (key == "seed") {
                    cfg.seed = static_cast<std::uint64_t>(to_int(value, line));
                } else if (key == "threads") {
                    cfg.threads = to_count(value, line);
                } else {
                    throw ParseError("unknown key '" + key + "' in [experiment]", line);
                }
            } else {
                auto &sc = cfg.synth;
                if (key == "num_subspaces")
                    sc.num_subspaces = to_count(value, line);
                else if (key == "subspace_dim")
                    sc.subspace_dim = to_count(value, line);
                else if (key == "ambient_dim")
                    sc.ambient_dim = to_count(value, line);
                else if (key == "points_per")
                    sc.points_per = to_count(value, line);
                else if (key == "noise_scale")
                    sc.noise_scale = to_real(value, line);
                else if (key == "noise_mode") {
                    if (value == "relative")
                        sc.noise_mode = NoiseMode::Relative;
                    else if (value == "per_entry")
                        sc.noise_mode = NoiseMode::PerEntry;
                    else
                        throw ParseError("noise_mode must be relative or per_entry", line);
                } else
                    throw ParseError("unknown key '" + key + "' in [synth]", line);
            }
        } catch (const ConfigError &e) {
            throw ParseError(e.what(), line);
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError &e) {
        throw ParseError(e.what(), 0);
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path.string() + "'", 0);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_experiment_config(os.str());
}

std::uint64_t trial_seed(std::uint64_t base, int trial) {
    // splitmix64 finalizer
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int default_thread_count() {
    if (const char *env = std::getenv("LRSC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

BenchResults run_bench(const ExperimentConfig &cfg) {
    cfg.validate();
    std::vector<double> lambdas = cfg.lambda_grid;
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    std::vector<double> ps = cfg.p_grid;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<Method> methods = cfg.methods;
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    struct Job {
        double p;
        int trial;
    };
    std::vector<Job> jobs;
    for (double p : ps)
        for (int t = 0; t < cfg.trials; ++t)
            jobs.push_back({p, t});

    std::vector<std::vector<BenchRow>> per_job(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size())
                return;
            try {
                SynthConfig sc       = cfg.synth;
                sc.corrupt_fraction  = jobs[j].p;
                sc.seed              = trial_seed(cfg.seed, jobs[j].trial);
                const Dataset data   = generate(sc);
                const int k          = sc.num_subspaces;
                const std::uint64_t cluster_seed = trial_seed(sc.seed, 7);
                auto &out            = per_job[j];
                for (Method m : methods) {
                    const std::vector<double> grid =
                        m == Method::Sim ? std::vector<double>{0.0} : lambdas;
                    for (double lambda : grid) {
                        const ClusterResult res = run_pipeline(data, m, lambda, k, cluster_seed);
                        out.push_back({m, jobs[j].p, lambda, jobs[j].trial, *res.accuracy,
                                       res.kept_rank, res.reconstruction_seconds});
                    }
                }
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!failure)
                    failure = std::current_exception();
                next = jobs.size();
                return;
            }
        }
    };

    const int nthreads = std::clamp<int>(cfg.threads > 0 ? cfg.threads : default_thread_count(),
                                         1, static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);

    BenchResults res;
    for (auto &rows : per_job)
        res.rows.insert(res.rows.end(), rows.begin(), rows.end());
    std::sort(res.rows.begin(), res.rows.end(), [](const BenchRow &a, const BenchRow &b) {
        return std::tie(a.method, a.p, a.lambda, a.trial) <
               std::tie(b.method, b.p, b.lambda, b.trial);
    });

    // Mean over trials per (method, p, lambda), then best lambda per (method, p).
    std::map<std::tuple<Method, double, double>, std::pair<double, int>> means;
    for (const auto &r : res.rows) {
        auto &acc = means[{r.method, r.p, r.lambda}];
        acc.first += r.accuracy;
        acc.second += 1;
    }
    std::map<std::pair<Method, double>, BenchSummaryRow> best;
    for (const auto &[key, acc] : means) {
        const auto [m, p, lambda] = key;
        const double mean         = acc.first / acc.second;
        auto it                   = best.find({m, p});
        if (it == best.end())
            best.emplace(std::pair{m, p}, BenchSummaryRow{m, p, lambda, mean});
        else if (mean > it->second.mean_accuracy)
            it->second = {m, p, lambda, mean};
    }
    for (const auto &[key, row] : best)
        res.summary.push_back(row);
    return res;
}

std::string results_csv(const BenchResults &r) {
    std::ostringstream os;
    os << "method,p,lambda,trial,accuracy,kept_rank\n";
    for (const auto &row : r.rows)
        os << method_name(row.method) << ',' << format_real(row.p) << ','
           << format_real(row.lambda) << ',' << row.trial << ',' << format_real(row.accuracy)
           << ',' << row.kept_rank << '\n';
    return os.str();
}

std::string timing_csv(const BenchResults &r) {
    std::ostringstream os;
    os << "method,p,lambda,trial,seconds\n";
    for (const auto &row : r.rows)
        os << method_name(row.method) << ',' << format_real(row.p) << ','
           << format_real(row.lambda) << ',' << row.trial << ',' << format_real(row.seconds)
           << '\n';
    return os.str();
}

std::string summary_csv(const BenchResults &r) {
    std::ostringstream os;
    os << "method,p,best_lambda,mean_accuracy\n";
    for (const auto &row : r.summary)
        os << method_name(row.method) << ',' << format_real(row.p) << ','
           << format_real(row.best_lambda) << ',' << format_real(row.mean_accuracy) << '\n';
    return os.str();
}

std::string plot_csv(const BenchResults &r) {
    std::ostringstream os;
    os << "method,p,mean_accuracy\n";
    for (const auto &row : r.summary)
        os << method_name(row.method) << ',' << format_real(row.p) << ','
           << format_real(row.mean_accuracy) << '\n';
    return os.str();
}

void write_bench_outputs(const std::filesystem::path &dir, const BenchResults &r) {
    std::filesystem::create_directories(dir);
    const std::pair<const char *, std::string> files[] = {
        {"results.csv", results_csv(r)},
        {"summary.csv", summary_csv(r)},
        {"plot.csv", plot_csv(r)},
        {"timing.csv", timing_csv(r)},
    };
    for (const auto &[name, text] : files) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out)
            throw Error("cannot write " + (dir / name).string());
        out << text;
    }
}

} // namespace lrsc
