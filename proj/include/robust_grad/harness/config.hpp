#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "robust_grad/harness/records.hpp"
#include "robust_grad/problems.hpp"

namespace robust_grad::harness {

/// Invalid experiment description; the CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Study { Moments, Estimate, Optimize, Check };

std::string_view to_string(Study s);
Study study_from_string(std::string_view name);

struct ExperimentConfig {
    Study study = Study::Estimate;
    std::vector<std::string> methods;
    std::vector<double> alphas;
    std::vector<problems::Setting> settings;
    std::size_t dim = 10;
    double eta = 0.01;
    double tau = 0.01;
    double mu = 1.345;
    double beta = 0.9;
    double c = 50.0;
    std::size_t iters = 1000;
    std::size_t n_samples = 5;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> n_grid;  // moments study sample sizes
    std::size_t trials = 10000;       // moments study repetitions
    std::string out;                  // empty means stdout
    OutputFormat format = OutputFormat::Csv;
    std::size_t jobs = 1;
    std::size_t record_every = 1;  // keep every k-th iteration row (the last one always)

    /// Throws ConfigError when a listed method is unknown for the study or a
    /// hyperparameter it needs is out of range.
    void validate() const;
};

/// Per-study defaults: the settings the reproduction studies are built around.
ExperimentConfig default_config(Study study);

/// Overlays keys from a JSON object; unknown keys are rejected.
/// Lists may be given as JSON arrays or as comma-separated strings.
void apply_json(ExperimentConfig& config, const nlohmann::json& doc);

/// Reads a JSON document from disk and overlays it.
void apply_config_file(ExperimentConfig& config, const std::string& path);

/// "0-49", "1,5,9", "0-4,10" (ranges inclusive).
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace robust_grad::harness
