#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robust_grad/aggregators.hpp"
#include "robust_grad/harness/records.hpp"
#include "robust_grad/prox.hpp"

namespace robust_grad::harness {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    double max_error = 0.0;  // worst deviation seen (meaning is per check)
    std::string detail;
};

struct CheckReport {
    std::vector<CheckOutcome> outcomes;

    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] std::vector<Row> rows() const;
};

struct CheckOptions {
    std::uint64_t seed = 0;
    std::size_t tuples = 1000;         // random (m, g, tau, mu) tuples for the identity checks
    std::size_t median_batches = 1000; // coordinate-median order statistic batches
    std::size_t geo_batches = 20;      // 5-point 2-D batches against the grid oracle
    prox::ClipKernels kernels{};       // swapped out only to demonstrate failure detection
};

/// Runs the structural identities (prox/projection equivalences, estimator vs
/// SPP step, Huber regimes, clip bounds, nonexpansiveness) and the
/// aggregator oracles.
CheckReport check_suite(const CheckOptions& options = {});

/// Brute-force minimizer of (1/n) sum |m - z_i|_2 for 2-D points: a fine grid
/// over the bounding box followed by compass-search refinement.
Vec grid_geometric_median_2d(const aggregators::SampleBatch& batch, std::size_t grid = 401);

}  // namespace robust_grad::harness
