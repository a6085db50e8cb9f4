#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>

#include "robust_grad/rng.hpp"
#include "robust_grad/stable_noise.hpp"
#include "robust_grad/vec.hpp"

namespace robust_grad::problems {

/// A stochastic first-order oracle g = grad l(w) + xi(w).
///
/// The exact loss and gradient are available for metrics only; optimizers
/// and estimators see nothing but `sample`.
class GradientOracle {
public:
    virtual ~GradientOracle() = default;

    [[nodiscard]] virtual std::size_t dim() const = 0;
    [[nodiscard]] virtual double loss(ConstVecView w) const = 0;
    [[nodiscard]] virtual Vec true_gradient(ConstVecView w) const = 0;
    [[nodiscard]] virtual Vec sample(ConstVecView w, Rng& rng) const = 0;

    /// Sigma(w) when the noise is a linear mix Sigma(w) zeta of i.i.d. stable
    /// coordinates; empty for other noise models.
    [[nodiscard]] virtual std::optional<stable::Matrix> noise_matrix(ConstVecView /*w*/) const { return std::nullopt; }
};

/// Oracle for estimating a constant vector: true gradient is `target`
/// everywhere (linear loss <target, w>), noise is i.i.d. stable per coordinate.
class FixedVectorOracle final : public GradientOracle {
public:
    FixedVectorOracle(Vec target, double alpha, double scale = 1.0);

    [[nodiscard]] std::size_t dim() const override { return target_.size(); }
    [[nodiscard]] double loss(ConstVecView w) const override;
    [[nodiscard]] Vec true_gradient(ConstVecView w) const override;
    [[nodiscard]] Vec sample(ConstVecView w, Rng& rng) const override;

    [[nodiscard]] const Vec& target() const { return target_; }
    [[nodiscard]] double alpha() const { return noise_.alpha; }

private:
    Vec target_;
    stable::StableNoiseSpec noise_;
};

std::unique_ptr<FixedVectorOracle> fixed_vector_oracle(Vec target, double alpha);

/// Target with i.i.d. standard Gaussian coordinates.
Vec random_target(std::size_t dim, Rng& rng);

// S1: i.i.d. stable coordinates.
// S2: S1 draw times sqrt(1 + |w|^2).
// S3: isotropic elliptically contoured stable vector.
enum class Setting { S1, S2, S3 };

std::string_view to_string(Setting s);
Setting setting_from_string(std::string_view name);

struct LeastSquaresSpec {
    std::size_t dim = 10;
    Setting setting = Setting::S1;
    double alpha = 1.1;
    double scale = 1.0;

    void validate() const;
};

/// l(w) = 1/2 |w|^2 with heavy-tailed gradient noise.
class LeastSquaresOracle final : public GradientOracle {
public:
    explicit LeastSquaresOracle(LeastSquaresSpec spec);

    [[nodiscard]] std::size_t dim() const override { return spec_.dim; }
    [[nodiscard]] double loss(ConstVecView w) const override;
    [[nodiscard]] Vec true_gradient(ConstVecView w) const override;
    [[nodiscard]] Vec sample(ConstVecView w, Rng& rng) const override;
    [[nodiscard]] std::optional<stable::Matrix> noise_matrix(ConstVecView w) const override;

    /// Multiplier applied to the base noise draw at w: sqrt(1 + |w|^2) under S2, 1 otherwise.
    [[nodiscard]] double noise_scale_factor(ConstVecView w) const;
    [[nodiscard]] const LeastSquaresSpec& spec() const { return spec_; }

private:
    LeastSquaresSpec spec_;
    stable::StableNoiseSpec noise_;
};

std::unique_ptr<LeastSquaresOracle> least_squares_oracle(const LeastSquaresSpec& spec);

}  // namespace robust_grad::problems
