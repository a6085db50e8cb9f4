#include "robust_grad/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace robust_grad::optimizers {

namespace {

class Averager {
public:
    Averager(std::size_t dim, std::size_t horizon)
        : sum_(dim, 0.0), theta_(static_cast<double>(horizon) / static_cast<double>(horizon + 2)) {}

    void add(ConstVecView w) {
        for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += weight_ * w[i];
        weight_ *= theta_;
        ++count_;
    }

    [[nodiscard]] Vec value() const { return count_ == 0 ? sum_ : vec::scaled(sum_, 1.0 / static_cast<double>(count_)); }

private:
    Vec sum_;
    double theta_;
    double weight_ = 1.0;
    std::size_t count_ = 0;
};

TrajectoryRecord describe(const problems::GradientOracle& problem, std::size_t iter, ConstVecView w) {
    TrajectoryRecord rec;
    rec.iter = iter;
    rec.loss = problem.loss(w);
    rec.grad_norm = vec::norm2(problem.true_gradient(w));
    return rec;
}

bool diverged(const TrajectoryRecord& rec, ConstVecView w, double threshold) {
    return !std::isfinite(rec.loss) || rec.loss > threshold || !vec::all_finite(w);
}

Vec starting_point(const problems::GradientOracle& problem, const RunConfig& config) {
    if (config.initial_weights) {
        if (config.initial_weights->size() != problem.dim())
            throw std::invalid_argument("initial weights dimension does not match the problem");
        return *config.initial_weights;
    }
    return default_initial_weights(problem.dim(), config.seed);
}

template <class Step>
RunResult drive(const problems::GradientOracle& problem, const RunConfig& config, Step&& step) {
    const auto started = std::chrono::steady_clock::now();
    RunResult result;
    Vec w = starting_point(problem, config);
    Averager averager(w.size(), config.iters);

    result.records.reserve(config.iters + 1);
    result.records.push_back(describe(problem, 0, w));
    for (std::size_t t = 0; t < config.iters; ++t) {
        averager.add(w);
        TrajectoryRecord rec = step(w, t);
        if (diverged(rec, w, config.divergence_loss)) {
            result.records.push_back(std::move(rec));
            result.diverged = true;
            break;
        }
        result.records.push_back(std::move(rec));
    }

    result.final_weights = w;
    result.averaged_weights = averager.value();
    result.averaged_loss = problem.loss(result.averaged_weights);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace

void RunConfig::validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("learning rate must be finite and >= 0");
    if (iters == 0) throw std::invalid_argument("iters must be at least 1");
    if (n_samples == 0) throw std::invalid_argument("n_samples must be at least 1");
    if (const auto* est = std::get_if<estimators::EstimatorConfig>(&method)) {
        est->validate();
        if (n_samples != 1) throw std::invalid_argument("online estimators receive exactly one sample per iteration");
    }
    geo.validate();
}

Vec default_initial_weights(std::size_t dim, std::uint64_t seed) {
    Rng rng = make_stream(seed, Stream::Init);
    Vec w(dim);
    for (auto& x : w) x = rng.normal();
    return w;
}

RunResult run_online(const problems::GradientOracle& problem, const RunConfig& config, Rng& rng) {
    config.validate();
    const auto* est_config = std::get_if<estimators::EstimatorConfig>(&config.method);
    if (!est_config) throw std::invalid_argument("run_online needs an estimator method");

    estimators::Estimator estimator(*est_config, problem.dim());
    return drive(problem, config, [&](Vec& w, std::size_t t) {
        const Vec g = problem.sample(w, rng);
        const Vec& m = estimator.update(g);
        const double est_error = vec::distance(m, problem.true_gradient(w));
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.eta * m[i];
        TrajectoryRecord rec = describe(problem, t + 1, w);
        rec.est_error = est_error;
        return rec;
    });
}

RunResult run_smgd(const problems::GradientOracle& problem, const RunConfig& config, Rng& rng) {
    config.validate();
    const auto* kind = std::get_if<aggregators::AggregatorKind>(&config.method);
    if (!kind) throw std::invalid_argument("run_smgd needs an aggregator");

    return drive(problem, config, [&](Vec& w, std::size_t t) {
        std::vector<Vec> draws;
        draws.reserve(config.n_samples);
        for (std::size_t i = 0; i < config.n_samples; ++i) draws.push_back(problem.sample(w, rng));
        const aggregators::SampleBatch batch(std::move(draws));
        auto agg = aggregators::aggregate_detailed(*kind, batch, config.geo);
        const double est_error = vec::distance(agg.value, problem.true_gradient(w));
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.eta * agg.value[i];
        TrajectoryRecord rec = describe(problem, t + 1, w);
        rec.est_error = est_error;
        if (*kind == aggregators::AggregatorKind::L2Median) rec.median_residual = agg.residual;
        return rec;
    });
}

RunResult run(const problems::GradientOracle& problem, const RunConfig& config, Rng& rng) {
    return config.is_online() ? run_online(problem, config, rng) : run_smgd(problem, config, rng);
}

}  // namespace robust_grad::optimizers
