#include "robust_grad/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robust_grad::prox {

namespace {

void require_positive_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive and finite");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

void validate(const DistanceKind& kind) {
    if (const auto* h = std::get_if<Huber>(&kind)) {
        if (!(h->mu > 0.0) || !std::isfinite(h->mu)) throw std::invalid_argument("Huber mu must be positive");
    }
}

Vec vclip(double tau, ConstVecView v) {
    require_positive_tau(tau);
    const double factor = tau / std::max(tau, vec::norm2(v));
    return vec::scaled(v, factor);
}

Vec cclip(double tau, ConstVecView v) {
    require_positive_tau(tau);
    Vec out(v.begin(), v.end());
    for (auto& x : out) x = std::min(std::max(x, -tau), tau);
    return out;
}

Vec prox(const DistanceKind& kind, double tau, ConstVecView x, const ClipKernels& kernels) {
    require_positive_tau(tau);
    validate(kind);
    return std::visit(
        overloaded{
            [&](HalfSquaredL2) { return vec::scaled(x, 1.0 / (1.0 + tau)); },
            [&](L2) { return vec::sub(x, kernels.vclip(tau, x)); },
            [&](L1) { return vec::sub(x, kernels.cclip(tau, x)); },
            [&](Huber h) {
                // The Huber function here carries an extra mu on its linear
                // branch (mu |z| - mu^2 / 2), hence mu * tau in the shrinkage.
                const double factor = 1.0 - h.mu * tau / std::max(vec::norm2(x), h.mu * (1.0 + tau));
                return vec::scaled(x, factor);
            },
        },
        kind);
}

Vec spp_step(const DistanceKind& kind, double tau, ConstVecView m, ConstVecView g, const ClipKernels& kernels) {
    vec::require_same_dim(m, g, "spp_step");
    const Vec shrunk = prox(kind, tau, vec::sub(m, g), kernels);
    return vec::add(g, shrunk);
}

Vec project_dual_ball(DualNorm q, ConstVecView center, double radius, ConstVecView x) {
    vec::require_same_dim(center, x, "project_dual_ball");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");

    Vec out(x.begin(), x.end());
    switch (q) {
        case DualNorm::L2: {
            const double dist = vec::distance(x, center);
            if (dist <= radius) return out;
            const double t = radius / dist;
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = center[i] + t * (x[i] - center[i]);
            return out;
        }
        case DualNorm::Linf:
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(x[i], center[i] - radius, center[i] + radius);
            return out;
    }
    throw std::invalid_argument("project_dual_ball: unsupported norm");
}

DualNorm dual_norm_from_exponent(double q) {
    if (q == 2.0) return DualNorm::L2;
    if (q == std::numeric_limits<double>::infinity()) return DualNorm::Linf;
    throw std::invalid_argument("project_dual_ball: only q = 2 and q = infinity are supported");
}

Vec spp_step_projection(const DistanceKind& kind, double tau, ConstVecView m, ConstVecView g) {
    vec::require_same_dim(m, g, "spp_step_projection");
    if (std::holds_alternative<L2>(kind)) return project_dual_ball(DualNorm::L2, m, tau, g);
    if (std::holds_alternative<L1>(kind)) return project_dual_ball(DualNorm::Linf, m, tau, g);
    throw std::invalid_argument("spp_step_projection: only the l1 and l2 norms have a ball-projection form");
}

}  // namespace robust_grad::prox
