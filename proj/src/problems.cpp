#include "robust_grad/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace robust_grad::problems {

FixedVectorOracle::FixedVectorOracle(Vec target, double alpha, double scale) : target_(std::move(target)) {
    if (target_.empty()) throw std::invalid_argument("fixed_vector_oracle: empty target");
    noise_.alpha = alpha;
    noise_.scale = scale;
    noise_.dependence = stable::Dependence::IidComponents;
    noise_.location = target_;
    noise_.validate();
}

double FixedVectorOracle::loss(ConstVecView w) const {
    vec::require_same_dim(w, target_, "FixedVectorOracle::loss");
    return vec::dot(target_, w);
}

Vec FixedVectorOracle::true_gradient(ConstVecView w) const {
    vec::require_same_dim(w, target_, "FixedVectorOracle::true_gradient");
    return target_;
}

Vec FixedVectorOracle::sample(ConstVecView w, Rng& rng) const {
    vec::require_same_dim(w, target_, "FixedVectorOracle::sample");
    return stable::sample_vector(noise_, target_.size(), rng);
}

std::unique_ptr<FixedVectorOracle> fixed_vector_oracle(Vec target, double alpha) {
    return std::make_unique<FixedVectorOracle>(std::move(target), alpha);
}

Vec random_target(std::size_t dim, Rng& rng) {
    Vec out(dim);
    for (auto& x : out) x = rng.normal();
    return out;
}

std::string_view to_string(Setting s) {
    switch (s) {
        case Setting::S1: return "s1";
        case Setting::S2: return "s2";
        case Setting::S3: return "s3";
    }
    return "unknown";
}

Setting setting_from_string(std::string_view name) {
    if (name == "s1" || name == "S1") return Setting::S1;
    if (name == "s2" || name == "S2") return Setting::S2;
    if (name == "s3" || name == "S3") return Setting::S3;
    throw std::invalid_argument("unknown least-squares setting '" + std::string(name) + "' (expected s1|s2|s3)");
}

void LeastSquaresSpec::validate() const {
    if (dim == 0) throw std::invalid_argument("least squares: dim must be positive");
    stable::validate_alpha(alpha);
    if (!(scale > 0.0)) throw std::invalid_argument("least squares: scale must be positive");
}

LeastSquaresOracle::LeastSquaresOracle(LeastSquaresSpec spec) : spec_(spec) {
    spec_.validate();
    noise_.alpha = spec_.alpha;
    noise_.scale = spec_.scale;
    noise_.dependence =
        spec_.setting == Setting::S3 ? stable::Dependence::Elliptic : stable::Dependence::IidComponents;
}

double LeastSquaresOracle::loss(ConstVecView w) const {
    if (w.size() != spec_.dim) throw std::invalid_argument("LeastSquaresOracle::loss: dimension mismatch");
    return 0.5 * vec::squared_norm(w);
}

Vec LeastSquaresOracle::true_gradient(ConstVecView w) const {
    if (w.size() != spec_.dim) throw std::invalid_argument("LeastSquaresOracle::true_gradient: dimension mismatch");
    return Vec(w.begin(), w.end());
}

double LeastSquaresOracle::noise_scale_factor(ConstVecView w) const {
    return spec_.setting == Setting::S2 ? std::sqrt(1.0 + vec::squared_norm(w)) : 1.0;
}

Vec LeastSquaresOracle::sample(ConstVecView w, Rng& rng) const {
    if (w.size() != spec_.dim) throw std::invalid_argument("LeastSquaresOracle::sample: dimension mismatch");
    const Vec xi = stable::sample_vector(noise_, spec_.dim, rng);
    const double factor = noise_scale_factor(w);
    return vec::axpy(w, factor, xi);
}

std::optional<stable::Matrix> LeastSquaresOracle::noise_matrix(ConstVecView w) const {
    if (spec_.setting == Setting::S3) return std::nullopt;
    stable::Matrix sigma = stable::Matrix::identity(spec_.dim);
    const double s = spec_.scale * noise_scale_factor(w);
    for (auto& x : sigma.data) x *= s;
    return sigma;
}

std::unique_ptr<LeastSquaresOracle> least_squares_oracle(const LeastSquaresSpec& spec) {
    return std::make_unique<LeastSquaresOracle>(spec);
}

}  // namespace robust_grad::problems
