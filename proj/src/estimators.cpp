#include "robust_grad/estimators.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "robust_grad/problems.hpp"

namespace robust_grad::estimators {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames{{
    {Method::Momentum, "momentum"},
    {Method::VClip, "vclip"},
    {Method::CClip, "cclip"},
    {Method::Huber, "huber"},
    {Method::ClippedSGD, "clipped-sgd"},
    {Method::SignL1, "sign-l1"},
    {Method::NormalizedL2, "normalized-l2"},
}};

double require(const std::optional<double>& v, const char* name, Method m) {
    if (!v) throw std::invalid_argument(std::string(to_string(m)) + ": hyperparameter '" + name + "' is required");
    if (!std::isfinite(*v)) throw std::invalid_argument(std::string(name) + " must be finite");
    return *v;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string_view to_string(Method m) {
    for (const auto& [method, name] : kMethodNames)
        if (method == m) return name;
    return "unknown";
}

Method method_from_string(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
    std::replace(lowered.begin(), lowered.end(), '_', '-');
    for (const auto& [method, n] : kMethodNames)
        if (n == lowered) return method;
    throw std::invalid_argument("unknown estimator method '" + std::string(name) + "'");
}

void EstimatorConfig::validate() const {
    switch (method) {
        case Method::ClippedSGD: {
            const double b = require(beta, "beta", method);
            const double radius = require(c, "c", method);
            if (!(b >= 0.0 && b < 1.0)) throw std::invalid_argument("clipped-sgd: beta must lie in [0, 1)");
            if (!(radius > 0.0)) throw std::invalid_argument("clipped-sgd: c must be positive");
            return;
        }
        case Method::Huber:
            if (!(huber_mu() > 0.0) || !std::isfinite(huber_mu()))
                throw std::invalid_argument("huber: mu must be positive");
            [[fallthrough]];
        default:
            if (!(require(tau, "tau", method) > 0.0))
                throw std::invalid_argument(std::string(to_string(method)) + ": tau must be positive");
    }
}

std::optional<prox::DistanceKind> EstimatorConfig::distance() const {
    switch (method) {
        case Method::Momentum: return prox::HalfSquaredL2{};
        case Method::VClip: return prox::L2{};
        case Method::CClip: return prox::L1{};
        case Method::Huber: return prox::Huber{huber_mu()};
        default: return std::nullopt;
    }
}

EstimatorState estimator_update(const EstimatorConfig& config, const EstimatorState& state, ConstVecView g) {
    config.validate();
    vec::require_same_dim(state.m, g, "estimator_update");

    const std::size_t d = g.size();
    const Vec m = config.cold_start ? Vec(d, 0.0) : state.m;
    EstimatorState next{Vec(d), state.t + 1};
    Vec& out = next.m;

    switch (config.method) {
        case Method::Momentum: {
            const double tau = *config.tau;
            const double weight = tau / (1.0 + tau);
            for (std::size_t i = 0; i < d; ++i) out[i] = (1.0 - weight) * m[i] + weight * g[i];
            break;
        }
        case Method::VClip: {
            const Vec step = prox::vclip(*config.tau, vec::sub(g, m));
            out = vec::add(m, step);
            break;
        }
        case Method::CClip: {
            const Vec step = prox::cclip(*config.tau, vec::sub(g, m));
            out = vec::add(m, step);
            break;
        }
        case Method::Huber: {
            const double tau = *config.tau;
            const double mu = config.huber_mu();
            const double beta = 1.0 - mu * tau / std::max(vec::distance(m, g), mu * (1.0 + tau));
            for (std::size_t i = 0; i < d; ++i) out[i] = beta * m[i] + (1.0 - beta) * g[i];
            break;
        }
        case Method::ClippedSGD: {
            const double beta = *config.beta;
            const double norm = vec::norm2(g);
            const double factor = norm > 0.0 ? std::min(1.0, *config.c / norm) : 1.0;
            for (std::size_t i = 0; i < d; ++i) out[i] = beta * m[i] + (1.0 - beta) * factor * g[i];
            break;
        }
        case Method::SignL1: {
            const double tau = *config.tau;
            for (std::size_t i = 0; i < d; ++i) out[i] = m[i] + tau * sign(g[i] - m[i]);
            break;
        }
        case Method::NormalizedL2: {
            const double tau = *config.tau;
            const double dist = vec::distance(g, m);
            if (dist == 0.0) {
                out = m;
            } else {
                for (std::size_t i = 0; i < d; ++i) out[i] = m[i] + tau * (g[i] - m[i]) / dist;
            }
            break;
        }
    }
    return next;
}

Estimator::Estimator(EstimatorConfig config, std::size_t dim)
    : config_(std::move(config)), state_(EstimatorState::zeros(dim)) {
    config_.validate();
}

const Vec& Estimator::update(ConstVecView g) {
    state_ = estimator_update(config_, state_, g);
    return state_.m;
}

std::vector<double> run_estimation(const EstimatorConfig& config, const problems::GradientOracle& oracle,
                                   ConstVecView weights, std::size_t iters, Rng& rng) {
    if (iters == 0) throw std::invalid_argument("run_estimation: iters must be positive");
    const Vec target = oracle.true_gradient(weights);
    const double target_norm = vec::norm2(target);
    const double denom = target_norm > 0.0 ? target_norm : 1.0;

    Estimator est(config, oracle.dim());
    std::vector<double> errors;
    errors.reserve(iters);
    for (std::size_t t = 0; t < iters; ++t) {
        const Vec g = oracle.sample(weights, rng);
        errors.push_back(vec::distance(est.update(g), target) / denom);
    }
    return errors;
}

std::vector<double> run_estimation(const EstimatorConfig& config, const problems::GradientOracle& oracle,
                                   std::size_t iters, Rng& rng) {
    const Vec origin(oracle.dim(), 0.0);
    return run_estimation(config, oracle, origin, iters, rng);
}

}  // namespace robust_grad::estimators
