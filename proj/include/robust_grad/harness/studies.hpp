#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "robust_grad/harness/config.hpp"
#include "robust_grad/harness/records.hpp"
#include "robust_grad/optimizers.hpp"

namespace robust_grad::harness {

// ---------------------------------------------------------------------------
// Moments of the 1-D sample median versus the sample mean of standard
// alpha-stable draws.
// ---------------------------------------------------------------------------

struct MomentStats {
    double first = 0.0;
    double second = 0.0;
    double second_se = 0.0;  // Monte-Carlo standard error of `second`
};

struct MomentEntry {
    double alpha = 0.0;
    std::size_t n = 0;
    MomentStats median;
    MomentStats mean;
};

/// For each (alpha, n): `trials` repetitions of n draws; moments of their
/// median and mean. Each cell has its own stream derived from `seed`.
std::vector<MomentEntry> moments_study(const std::vector<double>& alphas, const std::vector<std::size_t>& ns,
                                       std::size_t trials, std::uint64_t seed, std::size_t jobs = 1);

std::vector<Row> moment_rows(const std::vector<MomentEntry>& table, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fixed-vector estimation.
// ---------------------------------------------------------------------------

struct EstimateCell {
    std::string method;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> errors;  // relative error after each update
};

struct EstimateOutput {
    std::vector<EstimateCell> cells;  // ordered (alpha, method, seed)
    std::vector<Row> rows;

    /// Final relative errors across seeds for one (method, alpha).
    [[nodiscard]] std::vector<double> final_errors(const std::string& method, double alpha) const;
};

EstimateOutput estimate_study(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Least-squares training.
// ---------------------------------------------------------------------------

struct OptimizeCell {
    std::string method;
    problems::Setting setting = problems::Setting::S1;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    optimizers::RunResult run;

    [[nodiscard]] double initial_loss() const { return run.records.front().loss; }
    [[nodiscard]] double final_loss() const { return run.records.back().loss; }
};

struct OptimizeOutput {
    std::vector<OptimizeCell> cells;  // ordered (setting, alpha, method, seed)
    std::vector<Row> rows;

    [[nodiscard]] std::vector<const OptimizeCell*> select(const std::string& method, problems::Setting setting) const;
};

/// Builds the run configuration one optimize-study cell uses.
optimizers::RunConfig make_run_config(const ExperimentConfig& config, const std::string& method, std::uint64_t seed);

OptimizeOutput optimize_study(const ExperimentConfig& config);

/// Median of a sample (midpoint convention for even sizes).
double median_of(std::vector<double> values);

}  // namespace robust_grad::harness
