#include "robust_grad/harness/studies.hpp"

#include <algorithm>
#include <cmath>

#include "robust_grad/aggregators.hpp"
#include "robust_grad/harness/parallel.hpp"
#include "robust_grad/problems.hpp"
#include "robust_grad/stable_noise.hpp"

namespace robust_grad::harness {

namespace {

MomentStats summarize(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : xs) {
        s1 += x;
        s2 += x * x;
    }
    MomentStats st;
    st.first = s1 / n;
    st.second = s2 / n;
    double var = 0.0;
    for (double x : xs) {
        const double dev = x * x - st.second;
        var += dev * dev;
    }
    st.second_se = xs.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return st;
}

bool keep_iter(std::size_t iter, std::size_t last, std::size_t every) {
    return iter == 0 || iter == last || iter % every == 0;
}

estimators::EstimatorConfig estimator_config(const ExperimentConfig& config, const std::string& method) {
    estimators::EstimatorConfig ec;
    ec.method = estimators::method_from_string(method);
    ec.tau = config.tau;
    ec.mu = config.mu;
    ec.beta = config.beta;
    ec.c = config.c;
    return ec;
}

}  // namespace

double median_of(std::vector<double> values) { return aggregators::scalar_median(std::move(values)); }

// -- moments ------------------------------------------------------------------

std::vector<MomentEntry> moments_study(const std::vector<double>& alphas, const std::vector<std::size_t>& ns,
                                       std::size_t trials, std::uint64_t seed, std::size_t jobs) {
    if (trials == 0) throw ConfigError("moments: trials must be positive");
    for (auto n : ns)
        if (n == 0) throw ConfigError("moments: sample size must be positive");

    const std::size_t cells = alphas.size() * ns.size();
    const Rng base = make_stream(seed, Stream::Trials);
    return parallel_map(cells, jobs, [&](std::size_t idx) {
        const double alpha = alphas[idx / ns.size()];
        const std::size_t n = ns[idx % ns.size()];
        Rng rng = base.split(idx);

        std::vector<double> medians(trials);
        std::vector<double> means(trials);
        std::vector<double> draws(n);
        for (std::size_t k = 0; k < trials; ++k) {
            double sum = 0.0;
            for (auto& x : draws) {
                x = stable::sample_standard_stable(alpha, rng);
                sum += x;
            }
            means[k] = sum / static_cast<double>(n);
            medians[k] = aggregators::scalar_median(draws);
        }
        return MomentEntry{alpha, n, summarize(medians), summarize(means)};
    });
}

std::vector<Row> moment_rows(const std::vector<MomentEntry>& table, std::uint64_t seed) {
    std::vector<Row> rows;
    for (const auto& e : table) {
        const std::string setting = "n=" + std::to_string(e.n);
        for (const auto& [arm, st] : {std::pair{"median", e.median}, std::pair{"mean", e.mean}}) {
            rows.push_back({"moments", arm, setting, e.alpha, seed, std::nullopt, "first_moment", st.first});
            rows.push_back({"moments", arm, setting, e.alpha, seed, std::nullopt, "second_moment", st.second});
            rows.push_back({"moments", arm, setting, e.alpha, seed, std::nullopt, "second_moment_se", st.second_se});
        }
    }
    return rows;
}

// -- fixed-vector estimation ----------------------------------------------------

std::vector<double> EstimateOutput::final_errors(const std::string& method, double alpha) const {
    std::vector<double> out;
    for (const auto& c : cells)
        if (c.method == method && c.alpha == alpha) out.push_back(c.errors.back());
    return out;
}

EstimateOutput estimate_study(const ExperimentConfig& config) {
    config.validate();
    const std::size_t n_methods = config.methods.size();
    const std::size_t n_seeds = config.seeds.size();
    const std::size_t cells = config.alphas.size() * n_methods * n_seeds;

    EstimateOutput out;
    out.cells = parallel_map(cells, config.jobs, [&](std::size_t idx) {
        const std::size_t alpha_idx = idx / (n_methods * n_seeds);
        const std::string& method = config.methods[(idx / n_seeds) % n_methods];
        const std::uint64_t seed = config.seeds[idx % n_seeds];
        const double alpha = config.alphas[alpha_idx];

        Rng target_rng = make_stream(seed, Stream::Target);
        const problems::FixedVectorOracle oracle(problems::random_target(config.dim, target_rng), alpha);
        // Same noise stream for every method at a given (seed, alpha).
        Rng noise = make_stream(seed, Stream::Noise).split(alpha_idx);
        auto errors = estimators::run_estimation(estimator_config(config, method), oracle, config.iters, noise);
        return EstimateCell{method, alpha, seed, std::move(errors)};
    });

    for (const auto& cell : out.cells) {
        const std::size_t last = cell.errors.size();
        for (std::size_t t = 1; t <= last; ++t) {
            if (!keep_iter(t, last, config.record_every)) continue;
            out.rows.push_back({"estimate", cell.method, "fixed", cell.alpha, cell.seed, t, "rel_error", cell.errors[t - 1]});
        }
    }
    for (double alpha : config.alphas) {
        for (const auto& method : config.methods) {
            const auto finals = out.final_errors(method, alpha);
            const auto [lo, hi] = std::minmax_element(finals.begin(), finals.end());
            const std::uint64_t last = config.iters;
            out.rows.push_back({"estimate", method, "fixed", alpha, std::nullopt, last, "final_rel_error_min", *lo});
            out.rows.push_back({"estimate", method, "fixed", alpha, std::nullopt, last, "final_rel_error_median", median_of(finals)});
            out.rows.push_back({"estimate", method, "fixed", alpha, std::nullopt, last, "final_rel_error_max", *hi});
        }
    }
    return out;
}

// -- least-squares training -----------------------------------------------------

std::vector<const OptimizeCell*> OptimizeOutput::select(const std::string& method, problems::Setting setting) const {
    std::vector<const OptimizeCell*> out;
    for (const auto& c : cells)
        if (c.method == method && c.setting == setting) out.push_back(&c);
    return out;
}

optimizers::RunConfig make_run_config(const ExperimentConfig& config, const std::string& method, std::uint64_t seed) {
    optimizers::RunConfig rc;
    rc.eta = config.eta;
    rc.iters = config.iters;
    rc.seed = seed;
    try {
        rc.method = aggregators::aggregator_from_string(method);
        rc.n_samples = config.n_samples;
    } catch (const std::invalid_argument&) {
        rc.method = estimator_config(config, method);
        rc.n_samples = 1;
    }
    return rc;
}

OptimizeOutput optimize_study(const ExperimentConfig& config) {
    config.validate();
    const std::size_t n_methods = config.methods.size();
    const std::size_t n_seeds = config.seeds.size();
    const std::size_t n_alphas = config.alphas.size();
    const std::size_t cells = config.settings.size() * n_alphas * n_methods * n_seeds;

    OptimizeOutput out;
    out.cells = parallel_map(cells, config.jobs, [&](std::size_t idx) {
        const std::size_t seed_idx = idx % n_seeds;
        const std::size_t method_idx = (idx / n_seeds) % n_methods;
        const std::size_t alpha_idx = (idx / (n_seeds * n_methods)) % n_alphas;
        const std::size_t setting_idx = idx / (n_seeds * n_methods * n_alphas);

        problems::LeastSquaresSpec spec;
        spec.dim = config.dim;
        spec.setting = config.settings[setting_idx];
        spec.alpha = config.alphas[alpha_idx];
        const problems::LeastSquaresOracle oracle(spec);

        const std::uint64_t seed = config.seeds[seed_idx];
        const std::string& method = config.methods[method_idx];
        Rng noise = make_stream(seed, Stream::Noise).split(setting_idx * 1000 + alpha_idx);
        auto result = optimizers::run(oracle, make_run_config(config, method, seed), noise);
        return OptimizeCell{method, spec.setting, spec.alpha, seed, std::move(result)};
    });

    for (const auto& cell : out.cells) {
        const std::string setting(problems::to_string(cell.setting));
        const auto& records = cell.run.records;
        const std::size_t last = records.back().iter;
        for (const auto& rec : records) {
            if (!keep_iter(rec.iter, last, config.record_every)) continue;
            out.rows.push_back({"optimize", cell.method, setting, cell.alpha, cell.seed, rec.iter, "loss", rec.loss});
            out.rows.push_back({"optimize", cell.method, setting, cell.alpha, cell.seed, rec.iter, "grad_norm", rec.grad_norm});
            if (rec.est_error)
                out.rows.push_back({"optimize", cell.method, setting, cell.alpha, cell.seed, rec.iter, "est_error", *rec.est_error});
            if (rec.median_residual)
                out.rows.push_back(
                    {"optimize", cell.method, setting, cell.alpha, cell.seed, rec.iter, "median_residual", *rec.median_residual});
        }
        out.rows.push_back({"optimize", cell.method, setting, cell.alpha, cell.seed, last, "diverged",
                            cell.run.diverged ? 1.0 : 0.0});
        out.rows.push_back({"optimize", cell.method, setting, cell.alpha, cell.seed, last, "avg_iterate_loss",
                            cell.run.averaged_loss});
    }
    return out;
}

}  // namespace robust_grad::harness
