#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "robust_grad/vec.hpp"

namespace robust_grad::aggregators {

/// n >= 1 points of a common dimension d >= 1.
class SampleBatch {
public:
    explicit SampleBatch(std::vector<Vec> points);

    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] std::size_t dim() const { return points_.front().size(); }
    [[nodiscard]] const std::vector<Vec>& points() const { return points_; }
    [[nodiscard]] const Vec& operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<Vec> points_;
};

struct GeoMedianSettings {
    double tolerance = 1e-10;  // stop once the relative step falls below this
    std::size_t max_iters = 1000;

    void validate() const;
};

struct GeoMedianResult {
    Vec point;
    double residual = 0.0;  // last relative step size
    std::size_t iterations = 0;
    bool converged = false;
};

enum class AggregatorKind { Mean, L1Median, L2Median };

std::string_view to_string(AggregatorKind k);
/// Accepts "mean", "l1-median", "l2-median". Throws std::invalid_argument.
AggregatorKind aggregator_from_string(std::string_view name);

Vec sample_mean(const SampleBatch& batch);

/// Per-coordinate 1-D median; midpoint of the two central order statistics for even n.
Vec coordinate_median(const SampleBatch& batch);

/// 1-D median of a scalar sample (same convention as coordinate_median).
double scalar_median(std::vector<double> values);

/// Weiszfeld iteration with the Vardi-Zhang modification at data points,
/// started from the coordinatewise median. A data point satisfying the
/// optimality condition is returned directly. If Weiszfeld exhausts max_iters
/// (and max_iters > 1), a damped Newton finish is attempted. Hitting the limit
/// is not an error: the last iterate comes back with converged = false and its
/// residual.
GeoMedianResult geometric_median(const SampleBatch& batch, const GeoMedianSettings& settings = {});

/// (1/n) sum_i |m - z_i|_2, the objective the geometric median minimizes.
double geometric_median_objective(const SampleBatch& batch, ConstVecView m);

struct AggregationResult {
    Vec value;
    double residual = 0.0;  // nonzero only for the iterative geometric median
};

AggregationResult aggregate_detailed(AggregatorKind kind, const SampleBatch& batch,
                                     const GeoMedianSettings& settings = {});

Vec aggregate(AggregatorKind kind, const SampleBatch& batch, const GeoMedianSettings& settings = {});

}  // namespace robust_grad::aggregators
