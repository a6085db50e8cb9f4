#pragma once

#include <cstdint>
#include <random>

namespace robust_grad {

/// Deterministic random stream.
///
/// Streams are addressed by a (seed, stream id) pair and derived through a
/// SplitMix64 mix, so every run cell (seed x purpose) owns an independent,
/// reproducible generator and can execute on any thread.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Child stream keyed by `key`; does not advance this stream.
    [[nodiscard]] Rng split(std::uint64_t key) const;

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform_open();
    double normal();
    double exponential();

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::exponential_distribution<double> exponential_{1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

/// Named stream purposes, so that e.g. the target vector of a seed is the
/// same no matter which method consumes it.
enum class Stream : std::uint64_t {
    Target = 1,
    Init = 2,
    Noise = 3,
    Trials = 4,
    Check = 5,
};

inline Rng make_stream(std::uint64_t seed, Stream s) { return Rng(seed, static_cast<std::uint64_t>(s)); }

}  // namespace robust_grad
