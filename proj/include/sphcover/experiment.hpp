#pragma once

#include "sphcover/hitting_set.hpp"
#include "sphcover/odeco.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sphcover {

enum class ExperimentKind { spectral, nuclear };

/// Read from `key = value` lines; `#` starts a comment.
///   name, experiment (spectral | nuclear), dims (e.g. 5x10x10,10x10x10),
///   r (0 = min of dims), instances, seed, hits, tol, max_iter,
///   als_max_iter, als_tol, budget.
struct ExperimentConfig {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::spectral;
    std::vector<Dims3> dims;
    Index r = 0;
    Index instances = 20;
    std::uint64_t seed = 0;
    std::string hits = "h5";
    double tol = 1e-6;
    int max_iter = 5000;
    int als_max_iter = 500;
    double als_tol = 1e-10;
    std::int64_t budget = 5000;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Hitting set on R^n from a spec string: h2, h4, h5[:alpha:beta],
/// h3[:alpha:beta], random:COUNT, grid:M, simplex, pm_basis, antipodal,
/// singleton. Random sets draw from `seed`.
HittingSet hitting_set_from_spec(const std::string& spec, Index n, std::uint64_t seed);

struct ExperimentRow {
    std::string dims;
    Index instance = 0;
    std::uint64_t seed = 0;
    /// |T|_sigma or |T|_* of the generated instance.
    double truth = 0.0;
    /// Algorithm output: approximation value or SDP optimum u.
    double value = 0.0;
    double bound = 0.0;
    /// ALS-refined value (spectral) or the certified lower bound (nuclear).
    double refined = 0.0;
    double refined_bound = 0.0;
    bool optimal = false;
    bool converged = true;
    int iterations = 0;
    double seconds = 0.0;
};

struct ExperimentAggregate {
    std::string dims;
    Index count = 0;
    double min_bound = 0.0;
    double max_bound = 0.0;
    double mean_bound = 0.0;
    double min_refined = 0.0;
    double max_refined = 0.0;
    double mean_refined = 0.0;
    double percent_optimal = 0.0;
    double mean_seconds = 0.0;
};

struct ExperimentSummary {
    std::vector<ExperimentRow> rows;
    /// One entry per dims cell, in first-appearance order.
    std::vector<ExperimentAggregate> aggregates;
};

/// Aggregates per dims cell; throws ParameterError on empty input.
ExperimentSummary summarize(std::span<const ExperimentRow> rows);

/// Per instance: odeco tensor, approx_spectral_norm on the smallest mode, ALS
/// from its solution. bound = value / |T|_sigma; optimal when the refined
/// ratio is within 1e-6 of 1. With `out_prefix`, CSV files are written
/// (rows so far on failure, then the error is rethrown).
ExperimentSummary run_spectral_experiment(const ExperimentConfig& config,
                                          const std::optional<std::filesystem::path>& out_prefix = std::nullopt);

/// Per instance: nuclear SDP with bound = u / |T|_* (no tau factor).
ExperimentSummary run_nuclear_experiment(const ExperimentConfig& config,
                                         const std::optional<std::filesystem::path>& out_prefix = std::nullopt);

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::optional<std::filesystem::path>& out_prefix = std::nullopt);

/// `<prefix>_rows.csv` and `<prefix>_summary.csv` are deterministic;
/// wall times go to `<prefix>_timing.csv`.
void write_rows_csv(std::ostream& os, std::span<const ExperimentRow> rows);
void write_summary_csv(std::ostream& os, std::span<const ExperimentAggregate> aggregates);
void write_timing_csv(std::ostream& os, std::span<const ExperimentRow> rows);
void write_experiment_files(const std::filesystem::path& prefix, const ExperimentSummary& summary);

}  // namespace sphcover
