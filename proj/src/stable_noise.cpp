#include "robust_grad/stable_noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace robust_grad::stable {

namespace {
double uniform_angle(Rng& rng) { return std::numbers::pi * (rng.uniform_open() - 0.5); }
}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(ConstVecView d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Vec Matrix::apply(ConstVecView x) const {
    if (x.size() != cols) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    Vec out(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += data[i * cols + j] * x[j];
        out[i] = s;
    }
    return out;
}

double Matrix::frobenius_squared() const { return vec::squared_norm(data); }

void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw std::invalid_argument("stability index must lie in (0, 2], got " + std::to_string(alpha));
    }
}

void StableNoiseSpec::validate() const {
    validate_alpha(alpha);
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("noise scale must be positive");
    if (dependence == Dependence::LinearMix) {
        if (!mix) throw std::invalid_argument("LinearMix noise requires a mixing matrix");
        if (mix->rows != mix->cols) throw std::invalid_argument("mixing matrix must be square");
    }
}

double stable_from_uniforms(double alpha, double angle, double exponential) {
    if (alpha == 1.0) return std::tan(angle);
    if (alpha == 2.0) return 2.0 * std::sin(angle) * std::sqrt(exponential);
    const double a_angle = alpha * angle;
    const double head = std::sin(a_angle) / std::pow(std::cos(angle), 1.0 / alpha);
    const double tail = std::pow(std::cos(angle - a_angle) / exponential, (1.0 - alpha) / alpha);
    return head * tail;
}

double sample_standard_stable(double alpha, Rng& rng) {
    validate_alpha(alpha);
    const double angle = uniform_angle(rng);
    const double w = rng.exponential();
    return stable_from_uniforms(alpha, angle, w);
}

double sample_positive_stable(double index, Rng& rng) {
    if (!(index > 0.0 && index <= 1.0)) throw std::invalid_argument("positive stable index must lie in (0, 1]");
    if (index == 1.0) return 1.0;
    // Kanter: U ~ Unif(0, pi), W ~ Exp(1).
    const double u = std::numbers::pi * rng.uniform_open();
    const double w = rng.exponential();
    const double zolotarev = std::sin(index * u) / std::pow(std::sin(u), 1.0 / index) *
                             std::pow(std::sin((1.0 - index) * u) / w, (1.0 - index) / index);
    return zolotarev;
}

namespace {

Vec elliptic_draw(double alpha, std::size_t dim, Rng& rng) {
    // X = sqrt(A) G with E exp(-sA) = exp(-s^(alpha/2)) and G ~ N(0, 2 I)
    // has characteristic function exp(-|t|^alpha): standard marginals.
    const double amplitude = sample_positive_stable(alpha / 2.0, rng);
    const double factor = std::sqrt(2.0 * amplitude);
    Vec out(dim);
    for (auto& x : out) x = factor * rng.normal();
    return out;
}

}  // namespace

Vec sample_vector(const StableNoiseSpec& spec, std::size_t dim, Rng& rng) {
    spec.validate();
    if (dim == 0) throw std::invalid_argument("sample_vector: dimension must be positive");
    if (!spec.location.empty() && spec.location.size() != dim) {
        throw std::invalid_argument("sample_vector: location dimension mismatch");
    }

    Vec out;
    switch (spec.dependence) {
        case Dependence::IidComponents:
            out.resize(dim);
            for (auto& x : out) x = sample_standard_stable(spec.alpha, rng);
            break;
        case Dependence::Elliptic:
            out = elliptic_draw(spec.alpha, dim, rng);
            break;
        case Dependence::LinearMix:
            if (spec.mix->rows != dim) throw std::invalid_argument("sample_vector: mixing matrix dimension mismatch");
            out = sample_linear_mix(*spec.mix, spec.alpha, rng);
            break;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] *= spec.scale;
        if (!spec.location.empty()) out[i] += spec.location[i];
    }
    return out;
}

Vec sample_linear_mix(const Matrix& sigma, double alpha, Rng& rng) {
    validate_alpha(alpha);
    if (sigma.rows != sigma.cols) throw std::invalid_argument("sample_linear_mix: matrix must be square");
    Vec zeta(sigma.cols);
    for (auto& z : zeta) z = sample_standard_stable(alpha, rng);
    return sigma.apply(zeta);
}

}  // namespace robust_grad::stable
