#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "robust_grad/aggregators.hpp"
#include "robust_grad/estimators.hpp"
#include "robust_grad/problems.hpp"
#include "robust_grad/rng.hpp"

namespace robust_grad::optimizers {

using MethodChoice = std::variant<estimators::EstimatorConfig, aggregators::AggregatorKind>;

struct RunConfig {
    double eta = 0.01;
    std::size_t iters = 1000;
    std::size_t n_samples = 1;  // online runs require exactly one
    std::uint64_t seed = 0;
    MethodChoice method = estimators::EstimatorConfig{};
    std::optional<Vec> initial_weights;  // default: N(0, I) from the seed's Init stream
    double divergence_loss = 1e6;        // loss above this, or non-finite, stops the run
    aggregators::GeoMedianSettings geo;

    [[nodiscard]] bool is_online() const { return std::holds_alternative<estimators::EstimatorConfig>(method); }
    void validate() const;
};

struct TrajectoryRecord {
    std::size_t iter = 0;
    double loss = 0.0;
    double grad_norm = 0.0;
    // |m_{t} - grad l(w_{t-1})|: the estimate against the gradient it was built for.
    std::optional<double> est_error;
    // Last relative Weiszfeld step when the l2-median is used.
    std::optional<double> median_residual;
};

struct RunResult {
    std::vector<TrajectoryRecord> records;  // records[0] describes w_0
    bool diverged = false;
    Vec final_weights;
    // (1/T) sum_t theta^t w_t with theta = T / (T + 2), over the steps actually taken.
    Vec averaged_weights;
    double averaged_loss = 0.0;
    double wall_seconds = 0.0;
};

/// Initial weights for a seed when the config does not pin them.
Vec default_initial_weights(std::size_t dim, std::uint64_t seed);

/// Online estimation while training: one sample per step,
///   m_{t+1} = estimator_update(m_t, g_t),  w_{t+1} = w_t - eta m_{t+1}.
RunResult run_online(const problems::GradientOracle& problem, const RunConfig& config, Rng& rng);

/// Sample median gradient descent: n samples per step at w_t,
///   w_{t+1} = w_t - eta * aggregate(g_t^(1..n)).
RunResult run_smgd(const problems::GradientOracle& problem, const RunConfig& config, Rng& rng);

/// Dispatches on config.method.
RunResult run(const problems::GradientOracle& problem, const RunConfig& config, Rng& rng);

}  // namespace robust_grad::optimizers
