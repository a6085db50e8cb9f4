// robust-grad: command-line driver for the reproduction studies.
//
//   robust-grad moments  [--alpha 1.1,1.5] [--n-grid 1,3,5] [--trials 10000]
//   robust-grad estimate [--methods momentum,vclip] [--tau 0.01] [--iters 1000] ...
//   robust-grad optimize [--setting s1,s2] [--eta 0.01] [--n-samples 5] ...
//   robust-grad check
//
// Exit codes: 0 success, 1 configuration error, 2 check-suite failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "robust_grad/harness/check_suite.hpp"
#include "robust_grad/harness/config.hpp"
#include "robust_grad/harness/studies.hpp"

namespace {

using namespace robust_grad;

constexpr int kExitConfig = 1;
constexpr int kExitCheckFailed = 2;

struct Flags {
    std::string study;
    std::optional<std::string> alpha, seeds, methods, setting, out, format, config, n_grid;
    std::optional<std::size_t> dim, iters, n_samples, jobs, trials, record_every;
    std::optional<double> tau, eta, mu, beta, c;
};

nlohmann::json overrides(const Flags& f) {
    nlohmann::json j = nlohmann::json::object();
    auto put = [&j](const char* key, const auto& opt) {
        if (opt) j[key] = *opt;
    };
    put("alpha", f.alpha);
    put("seeds", f.seeds);
    put("methods", f.methods);
    put("setting", f.setting);
    put("out", f.out);
    put("format", f.format);
    put("n_grid", f.n_grid);
    put("dim", f.dim);
    put("iters", f.iters);
    put("n_samples", f.n_samples);
    put("jobs", f.jobs);
    put("trials", f.trials);
    put("record_every", f.record_every);
    put("tau", f.tau);
    put("eta", f.eta);
    put("mu", f.mu);
    put("beta", f.beta);
    put("c", f.c);
    return j;
}

void emit(const harness::ExperimentConfig& config, const std::vector<harness::Row>& rows) {
    if (config.out.empty()) {
        harness::write_rows(std::cout, rows, config.format);
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw harness::ConfigError("cannot open output file '" + config.out + "'");
    harness::write_rows(file, rows, config.format);
}

int run(const Flags& flags) {
    const harness::Study study = harness::study_from_string(flags.study);
    harness::ExperimentConfig config = harness::default_config(study);
    if (flags.config) harness::apply_config_file(config, *flags.config);
    harness::apply_json(config, overrides(flags));
    config.validate();

    switch (study) {
        case harness::Study::Moments: {
            const auto seed = config.seeds.front();
            const auto table = harness::moments_study(config.alphas, config.n_grid, config.trials, seed, config.jobs);
            emit(config, harness::moment_rows(table, seed));
            return 0;
        }
        case harness::Study::Estimate:
            emit(config, harness::estimate_study(config).rows);
            return 0;
        case harness::Study::Optimize:
            emit(config, harness::optimize_study(config).rows);
            return 0;
        case harness::Study::Check: {
            harness::CheckOptions options;
            options.seed = config.seeds.front();
            const auto report = harness::check_suite(options);
            emit(config, report.rows());
            for (const auto& o : report.outcomes)
                if (!o.passed) std::cerr << "FAILED " << o.name << " (max error " << o.max_error << ", " << o.detail << ")\n";
            return report.all_passed() ? 0 : kExitCheckFailed;
        }
    }
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust gradient estimation studies under heavy-tailed noise"};
    Flags f;
    app.add_option("study", f.study, "moments | estimate | optimize | check")->required();
    app.add_option("--alpha", f.alpha, "stability index, or comma-separated list");
    app.add_option("--dim", f.dim, "problem dimension");
    app.add_option("--tau", f.tau, "SPP step size / clip threshold");
    app.add_option("--eta", f.eta, "learning rate");
    app.add_option("--mu", f.mu, "Huber parameter");
    app.add_option("--beta", f.beta, "clipped-SGD momentum coefficient");
    app.add_option("--c", f.c, "clipped-SGD clip radius");
    app.add_option("--iters", f.iters, "iterations per run");
    app.add_option("--n-samples", f.n_samples, "oracle calls per SMGD iteration");
    app.add_option("--seeds", f.seeds, "seed list, e.g. 0-49 or 1,2,3");
    app.add_option("--methods", f.methods, "comma-separated methods");
    app.add_option("--setting", f.setting, "least-squares noise setting(s): s1,s2,s3");
    app.add_option("--n-grid", f.n_grid, "moments study sample sizes (odd)");
    app.add_option("--trials", f.trials, "moments study repetitions");
    app.add_option("--record-every", f.record_every, "keep every k-th iteration row");
    app.add_option("--out", f.out, "output path (default stdout)");
    app.add_option("--format", f.format, "csv | jsonl");
    app.add_option("--config", f.config, "JSON config file; flags override its values");
    app.add_option("--jobs", f.jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        return run(f);
    } catch (const robust_grad::harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}
