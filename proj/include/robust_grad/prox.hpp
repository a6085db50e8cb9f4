#pragma once

#include <variant>

#include "robust_grad/vec.hpp"

namespace robust_grad::prox {

// Distance functions D for which the proximal step has a closed form.
struct HalfSquaredL2 {};
struct L1 {};
struct L2 {};
struct Huber {
    double mu = 1.345;
};

using DistanceKind = std::variant<HalfSquaredL2, L1, L2, Huber>;

/// Throws std::invalid_argument for a non-positive Huber mu.
void validate(const DistanceKind& kind);

/// tau / max(tau, |v|_2) * v. Output norm never exceeds tau.
Vec vclip(double tau, ConstVecView v);

/// Coordinatewise clamp to [-tau, tau].
Vec cclip(double tau, ConstVecView v);

/// The clip primitives the prox formulas are built from. Swappable so the
/// check suite can demonstrate that a corrupted primitive is detected.
struct ClipKernels {
    Vec (*vclip)(double, ConstVecView) = &prox::vclip;
    Vec (*cclip)(double, ConstVecView) = &prox::cclip;
};

/// prox_{tau D}(x), closed form:
///   HalfSquaredL2: x / (1 + tau)
///   L2:            x - vclip(tau, x)
///   L1:            x - cclip(tau, x)
///   Huber(mu):     (1 - mu tau / max(|x|, mu (1 + tau))) x
Vec prox(const DistanceKind& kind, double tau, ConstVecView x, const ClipKernels& kernels = {});

/// One stochastic proximal point step, m+ = g + prox_{tau D}(m - g).
Vec spp_step(const DistanceKind& kind, double tau, ConstVecView m, ConstVecView g,
             const ClipKernels& kernels = {});

enum class DualNorm { L2, Linf };

/// Euclidean projection of x onto { y : |y - center|_q <= radius }.
/// Computed directly from the ball geometry, independently of vclip/cclip.
Vec project_dual_ball(DualNorm q, ConstVecView center, double radius, ConstVecView x);

/// q = 2 or q = +infinity; throws for any other exponent.
DualNorm dual_norm_from_exponent(double q);

/// The ball-projection form of an SPP step for a norm distance: the projection
/// of g onto the dual-norm ball of radius tau around m. Only L1 and L2 qualify.
Vec spp_step_projection(const DistanceKind& kind, double tau, ConstVecView m, ConstVecView g);

}  // namespace robust_grad::prox
