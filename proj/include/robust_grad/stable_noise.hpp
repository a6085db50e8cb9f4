#pragma once

#include <cstddef>
#include <optional>

#include "robust_grad/rng.hpp"
#include "robust_grad/vec.hpp"

namespace robust_grad::stable {

// Symmetric alpha-stable laws in Nolan's S(alpha, 0, gamma, 0; 0) convention.
// With this convention the characteristic function is exp(-gamma^alpha |t|^alpha),
// so alpha = 1 is the standard Cauchy law and alpha = 2 is N(0, 2 gamma^2).

enum class Dependence { IidComponents, Elliptic, LinearMix };

/// Row-major dense square-or-not matrix, only what the noise model needs.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(ConstVecView d);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    [[nodiscard]] Vec apply(ConstVecView x) const;
    [[nodiscard]] double frobenius_squared() const;
};

struct StableNoiseSpec {
    double alpha = 2.0;
    double scale = 1.0;
    Dependence dependence = Dependence::IidComponents;
    Vec location;                // empty means zero
    std::optional<Matrix> mix;   // required for LinearMix

    /// Throws std::invalid_argument if alpha is outside (0, 2] or scale <= 0.
    void validate() const;
};

void validate_alpha(double alpha);

/// Chambers-Mallows-Stuck transform of an angle in (-pi/2, pi/2) and a unit
/// exponential. Odd in `angle`, which is what antithetic sampling relies on.
double stable_from_uniforms(double alpha, double angle, double exponential);

/// One draw from the standard (gamma = 1) symmetric alpha-stable law.
double sample_standard_stable(double alpha, Rng& rng);

/// Positive stable amplitude with Laplace transform exp(-s^index), index in (0, 1].
/// Kanter's representation (the totally skewed CMS case). Internal to the
/// elliptic sampler but exposed for testing.
double sample_positive_stable(double index, Rng& rng);

/// Vector draw according to `spec` (location added).
Vec sample_vector(const StableNoiseSpec& spec, std::size_t dim, Rng& rng);

/// Returns sigma * zeta with zeta having i.i.d. standard symmetric alpha-stable entries.
Vec sample_linear_mix(const Matrix& sigma, double alpha, Rng& rng);

}  // namespace robust_grad::stable
