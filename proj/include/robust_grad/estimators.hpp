#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robust_grad/prox.hpp"
#include "robust_grad/rng.hpp"
#include "robust_grad/vec.hpp"

namespace robust_grad::problems {
class GradientOracle;
}

namespace robust_grad::estimators {

enum class Method { Momentum, VClip, CClip, Huber, ClippedSGD, SignL1, NormalizedL2 };

constexpr double kDefaultHuberMu = 1.345;

std::string_view to_string(Method m);
/// Case-insensitive; accepts "momentum", "vclip", "cclip", "huber",
/// "clipped-sgd", "sign-l1", "normalized-l2". Throws std::invalid_argument.
Method method_from_string(std::string_view name);

/// Hyperparameters for one online estimator.
///
/// tau drives every method except ClippedSGD, which uses beta and c instead.
/// mu only matters for Huber and falls back to 1.345 when unset.
struct EstimatorConfig {
    Method method = Method::Momentum;
    std::optional<double> tau;
    std::optional<double> mu;
    std::optional<double> beta;
    std::optional<double> c;
    bool cold_start = false;

    /// Throws std::invalid_argument if a hyperparameter the method needs is
    /// missing or out of range.
    void validate() const;

    [[nodiscard]] double huber_mu() const { return mu.value_or(kDefaultHuberMu); }

    /// The SPP distance this method solves for, if it is one of the SPP family
    /// (Momentum, VClip, CClip, Huber).
    [[nodiscard]] std::optional<prox::DistanceKind> distance() const;
};

struct EstimatorState {
    Vec m;
    std::uint64_t t = 0;

    static EstimatorState zeros(std::size_t dim) { return EstimatorState{Vec(dim, 0.0), 0}; }
};

/// One online update m_t -> m_{t+1} given a fresh sample g.
EstimatorState estimator_update(const EstimatorConfig& config, const EstimatorState& state, ConstVecView g);

/// Owning wrapper around a config and its running state.
class Estimator {
public:
    Estimator(EstimatorConfig config, std::size_t dim);

    const Vec& update(ConstVecView g);
    [[nodiscard]] const Vec& estimate() const { return state_.m; }
    [[nodiscard]] const EstimatorState& state() const { return state_; }
    [[nodiscard]] const EstimatorConfig& config() const { return config_; }

private:
    EstimatorConfig config_;
    EstimatorState state_;
};

/// Runs `iters` estimator updates against samples drawn at the fixed point
/// `weights` and returns the relative error |m_t - target| / |target| after
/// each update, target being the oracle's true gradient there. A zero target
/// falls back to the absolute error. m_0 = 0.
std::vector<double> run_estimation(const EstimatorConfig& config, const problems::GradientOracle& oracle,
                                   ConstVecView weights, std::size_t iters, Rng& rng);

/// Same, at weights = 0.
std::vector<double> run_estimation(const EstimatorConfig& config, const problems::GradientOracle& oracle,
                                   std::size_t iters, Rng& rng);

}  // namespace robust_grad::estimators
