#include "robust_grad/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <type_traits>

#include "robust_grad/aggregators.hpp"
#include "robust_grad/estimators.hpp"
#include "robust_grad/stable_noise.hpp"

namespace robust_grad::harness {

namespace {

std::vector<std::string> split_commas(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        std::string item(text.substr(start, end - start));
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view text, const char* key) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(std::string("invalid value '") + std::string(text) + "' for " + key);
    return value;
}

std::vector<std::string> string_list(const nlohmann::json& v, const char* key) {
    if (v.is_string()) return split_commas(v.get<std::string>());
    if (v.is_array()) {
        std::vector<std::string> out;
        for (const auto& item : v) {
            if (!item.is_string()) throw ConfigError(std::string(key) + ": expected strings");
            out.push_back(item.get<std::string>());
        }
        return out;
    }
    throw ConfigError(std::string(key) + ": expected a string or an array of strings");
}

template <class T>
std::vector<T> number_list(const nlohmann::json& v, const char* key) {
    std::vector<T> out;
    if (v.is_number()) {
        out.push_back(v.get<T>());
    } else if (v.is_string()) {
        for (const auto& s : split_commas(v.get<std::string>())) out.push_back(parse_number<T>(s, key));
    } else if (v.is_array()) {
        for (const auto& item : v) {
            if (!item.is_number()) throw ConfigError(std::string(key) + ": expected numbers");
            out.push_back(item.get<T>());
        }
    } else {
        throw ConfigError(std::string(key) + ": expected a number, a list, or a comma-separated string");
    }
    return out;
}

template <class T>
T scalar(const nlohmann::json& v, const char* key) {
    if (v.is_number()) {
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_integer() && v.get<long long>() < 0) throw ConfigError(std::string(key) + ": must be >= 0");
        }
        return v.get<T>();
    }
    if (v.is_string()) return parse_number<T>(v.get<std::string>(), key);
    throw ConfigError(std::string(key) + ": expected a number");
}

bool is_estimator(const std::string& name) {
    try {
        estimators::method_from_string(name);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

bool is_aggregator(const std::string& name) {
    try {
        aggregators::aggregator_from_string(name);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

}  // namespace

std::string_view to_string(Study s) {
    switch (s) {
        case Study::Moments: return "moments";
        case Study::Estimate: return "estimate";
        case Study::Optimize: return "optimize";
        case Study::Check: return "check";
    }
    return "unknown";
}

Study study_from_string(std::string_view name) {
    if (name == "moments") return Study::Moments;
    if (name == "estimate") return Study::Estimate;
    if (name == "optimize") return Study::Optimize;
    if (name == "check") return Study::Check;
    throw ConfigError("unknown study '" + std::string(name) + "' (expected moments|estimate|optimize|check)");
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& item : split_commas(text)) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            seeds.push_back(parse_number<std::uint64_t>(item, "seeds"));
            continue;
        }
        const auto lo = parse_number<std::uint64_t>(std::string_view(item).substr(0, dash), "seeds");
        const auto hi = parse_number<std::uint64_t>(std::string_view(item).substr(dash + 1), "seeds");
        if (hi < lo) throw ConfigError("seeds: empty range '" + item + "'");
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw ConfigError("seeds: no seeds given");
    return seeds;
}

ExperimentConfig default_config(Study study) {
    ExperimentConfig c;
    c.study = study;
    c.seeds = parse_seed_list("0-49");
    switch (study) {
        case Study::Moments:
            c.alphas = {1.1, 1.5};
            c.n_grid = {1, 3, 5, 9, 17, 33};
            c.trials = 10000;
            break;
        case Study::Estimate:
            c.methods = {"momentum", "vclip", "cclip", "huber"};
            c.alphas = {2.0, 1.75, 1.5, 1.25, 1.1, 1.0};
            c.tau = 0.01;
            c.iters = 1000;
            c.dim = 10;
            break;
        case Study::Optimize:
            c.methods = {"l1-median", "l2-median", "mean", "vclip", "cclip", "huber", "clipped-sgd"};
            c.alphas = {1.1};
            c.settings = {problems::Setting::S1, problems::Setting::S2, problems::Setting::S3};
            c.tau = 1.0;
            c.eta = 0.01;
            c.beta = 0.9;
            c.c = 50.0;
            c.n_samples = 5;
            c.iters = 1000;
            c.dim = 10;
            break;
        case Study::Check:
            c.seeds = {0};
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (jobs == 0) throw ConfigError("jobs must be at least 1");
    if (record_every == 0) throw ConfigError("record_every must be at least 1");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        throw ConfigError("seeds must be distinct");
    for (double a : alphas) {
        try {
            stable::validate_alpha(a);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    switch (study) {
        case Study::Moments:
            if (alphas.empty()) throw ConfigError("moments: no alpha values");
            if (n_grid.empty()) throw ConfigError("moments: empty n grid");
            if (trials == 0) throw ConfigError("moments: trials must be positive");
            for (auto n : n_grid)
                if (n == 0 || n % 2 == 0) throw ConfigError("moments: sample sizes must be odd and >= 1");
            return;
        case Study::Check:
            return;
        case Study::Estimate:
        case Study::Optimize:
            break;
    }

    if (methods.empty()) throw ConfigError("no methods listed");
    if (alphas.empty()) throw ConfigError("no alpha values");
    if (dim == 0) throw ConfigError("dim must be positive");
    if (iters == 0) throw ConfigError("iters must be positive");
    for (const auto& m : methods) {
        const bool ok = is_estimator(m) || (study == Study::Optimize && is_aggregator(m));
        if (!ok) throw ConfigError("method '" + m + "' is not available in the " + std::string(to_string(study)) + " study");
        if (is_estimator(m)) {
            estimators::EstimatorConfig ec;
            ec.method = estimators::method_from_string(m);
            ec.tau = tau;
            ec.mu = mu;
            ec.beta = beta;
            ec.c = c;
            try {
                ec.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (study == Study::Optimize) {
        if (settings.empty()) throw ConfigError("optimize: no settings");
        if (!(eta > 0.0)) throw ConfigError("optimize: eta must be positive");
        if (n_samples == 0) throw ConfigError("optimize: n_samples must be positive");
    }
}

void apply_json(ExperimentConfig& config, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    for (const auto& [key, v] : doc.items()) {
        if (v.is_null()) continue;
        if (key == "study") {
            if (!v.is_string()) throw ConfigError("study: expected a string");
            const Study s = study_from_string(v.get<std::string>());
            if (s != config.study) throw ConfigError("config file study does not match the requested study");
        } else if (key == "methods") {
            config.methods = string_list(v, "methods");
        } else if (key == "alpha" || key == "alphas") {
            config.alphas = number_list<double>(v, "alpha");
        } else if (key == "setting" || key == "settings") {
            config.settings.clear();
            for (const auto& s : string_list(v, "setting")) {
                try {
                    config.settings.push_back(problems::setting_from_string(s));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what());
                }
            }
        } else if (key == "dim") {
            config.dim = scalar<std::size_t>(v, "dim");
        } else if (key == "eta") {
            config.eta = scalar<double>(v, "eta");
        } else if (key == "tau") {
            config.tau = scalar<double>(v, "tau");
        } else if (key == "mu") {
            config.mu = scalar<double>(v, "mu");
        } else if (key == "beta") {
            config.beta = scalar<double>(v, "beta");
        } else if (key == "c") {
            config.c = scalar<double>(v, "c");
        } else if (key == "iters") {
            config.iters = scalar<std::size_t>(v, "iters");
        } else if (key == "n_samples" || key == "n-samples") {
            config.n_samples = scalar<std::size_t>(v, "n_samples");
        } else if (key == "seeds") {
            if (v.is_string()) {
                config.seeds = parse_seed_list(v.get<std::string>());
            } else {
                config.seeds = number_list<std::uint64_t>(v, "seeds");
            }
        } else if (key == "n_grid" || key == "n-grid") {
            config.n_grid = number_list<std::size_t>(v, "n_grid");
        } else if (key == "trials") {
            config.trials = scalar<std::size_t>(v, "trials");
        } else if (key == "out") {
            if (!v.is_string()) throw ConfigError("out: expected a path string");
            config.out = v.get<std::string>();
        } else if (key == "format") {
            if (!v.is_string()) throw ConfigError("format: expected csv or jsonl");
            try {
                config.format = format_from_string(v.get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        } else if (key == "jobs") {
            config.jobs = scalar<std::size_t>(v, "jobs");
        } else if (key == "record_every" || key == "record-every") {
            config.record_every = scalar<std::size_t>(v, "record_every");
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    apply_json(config, doc);
}

}  // namespace robust_grad::harness
