#include "sphcover/experiment.hpp"

#include "sphcover/covering.hpp"
#include "sphcover/nuclear.hpp"
#include "sphcover/parallel.hpp"
#include "sphcover/random.hpp"
#include "sphcover/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sphcover {

namespace {

constexpr int kCsvVersion = 1;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) throw ParseError("config: bad value for " + key + ": '" + value + "'");
    return out;
}

Dims3 parse_dims(const std::string& text) {
    const auto parts = split(text, 'x');
    if (parts.size() != 3) throw ParseError("config: dims entry '" + text + "' must look like 5x10x10");
    Dims3 d{};
    for (std::size_t k = 0; k < 3; ++k) {
        d[k] = parse_number<Index>("dims", parts[k]);
        if (d[k] < 1) throw ParseError("config: dims must be positive");
    }
    return d;
}

std::string dims_label(const Dims3& d) {
    return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
}

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Job {
    std::size_t cell;
    Index instance;
    std::uint64_t seed;
};

std::vector<Job> make_jobs(const ExperimentConfig& cfg) {
    if (cfg.dims.empty()) throw ParameterError("experiment needs at least one dims entry");
    if (cfg.instances < 1) throw ParameterError("experiment needs instances >= 1");
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < cfg.dims.size(); ++c) {
        const std::uint64_t cell_seed = derive_seed(cfg.seed, c);
        for (Index i = 0; i < cfg.instances; ++i)
            jobs.push_back({c, i, derive_seed(cell_seed, static_cast<std::uint64_t>(i))});
    }
    return jobs;
}

Index odeco_rank(const ExperimentConfig& cfg, const Dims3& d) {
    return cfg.r > 0 ? cfg.r : *std::min_element(d.begin(), d.end());
}

/// Runs `one(job)` for every job (in parallel), writes files and
/// aggregates. On failure the completed rows are flushed first.
template <typename One>
ExperimentSummary run_jobs(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& out_prefix,
                           One&& one) {
    const auto jobs = make_jobs(cfg);
    std::vector<ExperimentRow> rows(jobs.size());
    std::vector<char> done(jobs.size(), 0);
    try {
        parallel_for(static_cast<std::int64_t>(jobs.size()), [&](std::int64_t k) {
            const auto& job = jobs[static_cast<std::size_t>(k)];
            const auto start = std::chrono::steady_clock::now();
            ExperimentRow row = one(job);
            row.dims = dims_label(cfg.dims[job.cell]);
            row.instance = job.instance;
            row.seed = job.seed;
            row.seconds = seconds_since(start);
            rows[static_cast<std::size_t>(k)] = std::move(row);
            done[static_cast<std::size_t>(k)] = 1;
        });
    } catch (...) {
        if (out_prefix) {
            std::vector<ExperimentRow> partial;
            for (std::size_t k = 0; k < rows.size(); ++k)
                if (done[k]) partial.push_back(rows[k]);
            std::ofstream os(out_prefix->string() + "_rows.csv");
            write_rows_csv(os, partial);
        }
        throw;
    }
    ExperimentSummary summary = summarize(rows);
    if (out_prefix) write_experiment_files(*out_prefix, summary);
    return summary;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "name") {
            cfg.name = value;
        } else if (key == "experiment") {
            if (value == "spectral")
                cfg.kind = ExperimentKind::spectral;
            else if (value == "nuclear")
                cfg.kind = ExperimentKind::nuclear;
            else
                throw ParseError("config: experiment must be spectral or nuclear");
        } else if (key == "dims") {
            cfg.dims.clear();
            for (const auto& part : split(value, ','))
                if (!part.empty()) cfg.dims.push_back(parse_dims(part));
        } else if (key == "r") {
            cfg.r = parse_number<Index>(key, value);
        } else if (key == "instances") {
            cfg.instances = parse_number<Index>(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "hits") {
            cfg.hits = value;
        } else if (key == "tol") {
            cfg.tol = parse_number<double>(key, value);
        } else if (key == "max_iter") {
            cfg.max_iter = parse_number<int>(key, value);
        } else if (key == "als_max_iter") {
            cfg.als_max_iter = parse_number<int>(key, value);
        } else if (key == "als_tol") {
            cfg.als_tol = parse_number<double>(key, value);
        } else if (key == "budget") {
            cfg.budget = parse_number<std::int64_t>(key, value);
        } else {
            throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config " + path.string());
    return parse_config(is);
}

HittingSet hitting_set_from_spec(const std::string& spec, Index n, std::uint64_t seed) {
    const auto parts = split(spec, ':');
    const std::string& kind = parts.at(0);
    const auto arg = [&](std::size_t i) -> const std::string& {
        if (parts.size() <= i) throw ParameterError("hitting-set spec '" + spec + "' is missing an argument");
        return parts[i];
    };
    const auto real = [&](std::size_t i, double fallback) {
        return parts.size() > i ? parse_number<double>("hits", parts[i]) : fallback;
    };
    if (kind == "h2") return build_h2(n);
    if (kind == "h4") return build_h4(n);
    if (kind == "h5") return build_h5(n, real(1, kAlphaStar), real(2, kBetaStar));
    if (kind == "h3") return build_h3(n, real(1, kAlphaStar), real(2, kBetaStar));
    if (kind == "random") return build_random(n, parse_number<Index>("hits", arg(1)), seed);
    if (kind == "grid") return build_grid(n, parse_number<Index>("hits", arg(1)));
    return build_classical(n, parse_classical_kind(kind));
}

ExperimentSummary summarize(std::span<const ExperimentRow> rows) {
    if (rows.empty()) throw ParameterError("summarize: empty input");
    ExperimentSummary out;
    out.rows.assign(rows.begin(), rows.end());
    std::vector<std::string> cells;
    for (const auto& r : rows)
        if (std::find(cells.begin(), cells.end(), r.dims) == cells.end()) cells.push_back(r.dims);
    for (const auto& cell : cells) {
        ExperimentAggregate a;
        a.dims = cell;
        a.min_bound = a.min_refined = std::numeric_limits<double>::infinity();
        a.max_bound = a.max_refined = -std::numeric_limits<double>::infinity();
        double sum_bound = 0.0;
        double sum_refined = 0.0;
        double sum_seconds = 0.0;
        Index optimal = 0;
        for (const auto& r : rows) {
            if (r.dims != cell) continue;
            ++a.count;
            a.min_bound = std::min(a.min_bound, r.bound);
            a.max_bound = std::max(a.max_bound, r.bound);
            sum_bound += r.bound;
            a.min_refined = std::min(a.min_refined, r.refined_bound);
            a.max_refined = std::max(a.max_refined, r.refined_bound);
            sum_refined += r.refined_bound;
            sum_seconds += r.seconds;
            if (r.optimal) ++optimal;
        }
        const double n = static_cast<double>(a.count);
        a.mean_bound = std::clamp(sum_bound / n, a.min_bound, a.max_bound);
        a.mean_refined = std::isnan(sum_refined) ? sum_refined : std::clamp(sum_refined / n, a.min_refined, a.max_refined);
        if (std::isnan(sum_refined)) a.min_refined = a.max_refined = sum_refined;
        a.percent_optimal = 100.0 * static_cast<double>(optimal) / n;
        a.mean_seconds = sum_seconds / n;
        out.aggregates.push_back(a);
    }
    return out;
}

ExperimentSummary run_spectral_experiment(const ExperimentConfig& cfg,
                                          const std::optional<std::filesystem::path>& out_prefix) {
    return run_jobs(cfg, out_prefix, [&](const Job& job) {
        const Dims3& d = cfg.dims[job.cell];
        const OdecoInstance inst = gen_odeco(d, odeco_rank(cfg, d), job.seed);
        const Index n = *std::min_element(d.begin(), d.end());
        const std::vector<HittingSet> sets{hitting_set_from_spec(cfg.hits, n, derive_seed(job.seed, 1))};
        const auto approx = approx_spectral_norm(inst.tensor, std::span<const HittingSet>(sets));
        const auto refined = als_refine(inst.tensor, approx.solution, cfg.als_max_iter, cfg.als_tol);
        ExperimentRow row;
        row.truth = inst.true_spectral;
        row.value = approx.value;
        row.bound = approx.value / inst.true_spectral;
        row.refined = refined.value;
        row.refined_bound = refined.value / inst.true_spectral;
        row.optimal = row.refined_bound >= 1.0 - 1e-6;
        row.converged = refined.converged;
        row.iterations = refined.iterations;
        return row;
    });
}

ExperimentSummary run_nuclear_experiment(const ExperimentConfig& cfg,
                                         const std::optional<std::filesystem::path>& out_prefix) {
    return run_jobs(cfg, out_prefix, [&](const Job& job) {
        const Dims3& d = cfg.dims[job.cell];
        const OdecoInstance inst = gen_odeco(d, odeco_rank(cfg, d), job.seed);
        const Index n = *std::min_element(d.begin(), d.end());
        const std::vector<HittingSet> sets{hitting_set_from_spec(cfg.hits, n, derive_seed(job.seed, 1))};
        const auto problem = assemble_problem(inst.tensor, std::span<const HittingSet>(sets), cfg.budget);
        const auto result = solve_nuclear_sdp(problem, cfg.tol, cfg.max_iter);
        ExperimentRow row;
        row.truth = inst.true_nuclear;
        row.value = result.u;
        row.bound = result.u / inst.true_nuclear;
        row.refined = result.lower;
        row.refined_bound = result.lower / inst.true_nuclear;
        row.optimal = false;
        row.converged = result.converged;
        row.iterations = result.iterations;
        return row;
    });
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& out_prefix) {
    return cfg.kind == ExperimentKind::spectral ? run_spectral_experiment(cfg, out_prefix)
                                                : run_nuclear_experiment(cfg, out_prefix);
}

void write_rows_csv(std::ostream& os, std::span<const ExperimentRow> rows) {
    os << "version,dims,instance,seed,truth,value,bound,refined,refined_bound,optimal,converged,iterations\n";
    for (const auto& r : rows)
        os << kCsvVersion << ',' << r.dims << ',' << r.instance << ',' << r.seed << ',' << num(r.truth) << ','
           << num(r.value) << ',' << num(r.bound) << ',' << num(r.refined) << ',' << num(r.refined_bound) << ','
           << (r.optimal ? 1 : 0) << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << '\n';
}

void write_summary_csv(std::ostream& os, std::span<const ExperimentAggregate> aggregates) {
    os << "version,dims,count,min_bound,max_bound,mean_bound,min_refined,max_refined,mean_refined,percent_optimal\n";
    for (const auto& a : aggregates)
        os << kCsvVersion << ',' << a.dims << ',' << a.count << ',' << num(a.min_bound) << ',' << num(a.max_bound)
           << ',' << num(a.mean_bound) << ',' << num(a.min_refined) << ',' << num(a.max_refined) << ','
           << num(a.mean_refined) << ',' << num(a.percent_optimal) << '\n';
}

void write_timing_csv(std::ostream& os, std::span<const ExperimentRow> rows) {
    os << "version,dims,instance,seconds\n";
    for (const auto& r : rows)
        os << kCsvVersion << ',' << r.dims << ',' << r.instance << ',' << num(r.seconds) << '\n';
}

void write_experiment_files(const std::filesystem::path& prefix, const ExperimentSummary& summary) {
    const auto open = [&](const char* suffix) {
        std::ofstream os(prefix.string() + suffix);
        if (!os) throw Error("cannot write " + prefix.string() + suffix);
        return os;
    };
    auto rows = open("_rows.csv");
    write_rows_csv(rows, summary.rows);
    auto agg = open("_summary.csv");
    write_summary_csv(agg, summary.aggregates);
    auto timing = open("_timing.csv");
    write_timing_csv(timing, summary.rows);
}

}  // namespace sphcover
