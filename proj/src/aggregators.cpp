#include "robust_grad/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace robust_grad::aggregators {

SampleBatch::SampleBatch(std::vector<Vec> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("SampleBatch: empty batch");
    const std::size_t d = points_.front().size();
    if (d == 0) throw std::invalid_argument("SampleBatch: zero-dimensional points");
    for (const auto& p : points_)
        if (p.size() != d) throw std::invalid_argument("SampleBatch: points of differing dimension");
}

void GeoMedianSettings::validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("geometric median tolerance must be positive");
    if (max_iters == 0) throw std::invalid_argument("geometric median max_iters must be at least 1");
}

std::string_view to_string(AggregatorKind k) {
    switch (k) {
        case AggregatorKind::Mean: return "mean";
        case AggregatorKind::L1Median: return "l1-median";
        case AggregatorKind::L2Median: return "l2-median";
    }
    return "unknown";
}

AggregatorKind aggregator_from_string(std::string_view name) {
    if (name == "mean") return AggregatorKind::Mean;
    if (name == "l1-median" || name == "l1_median") return AggregatorKind::L1Median;
    if (name == "l2-median" || name == "l2_median") return AggregatorKind::L2Median;
    throw std::invalid_argument("unknown aggregator '" + std::string(name) + "'");
}

Vec sample_mean(const SampleBatch& batch) {
    Vec out(batch.dim(), 0.0);
    for (const auto& p : batch.points())
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i];
    const double n = static_cast<double>(batch.size());
    for (auto& x : out) x /= n;
    return out;
}

double scalar_median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("scalar_median: empty sample");
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

Vec coordinate_median(const SampleBatch& batch) {
    const std::size_t d = batch.dim();
    Vec out(d);
    std::vector<double> column(batch.size());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < batch.size(); ++k) column[k] = batch[k][i];
        out[i] = scalar_median(column);
    }
    return out;
}

double geometric_median_objective(const SampleBatch& batch, ConstVecView m) {
    vec::require_same_dim(batch[0], m, "geometric_median_objective");
    double s = 0.0;
    for (const auto& p : batch.points()) s += vec::distance(p, m);
    return s / static_cast<double>(batch.size());
}

namespace {

// In-place Cholesky solve of H s = g for symmetric positive definite H (row-major d x d).
bool cholesky_solve(std::vector<double>& h, Vec& g, std::size_t d) {
    for (std::size_t j = 0; j < d; ++j) {
        double diag = h[j * d + j];
        for (std::size_t k = 0; k < j; ++k) diag -= h[j * d + k] * h[j * d + k];
        if (!(diag > 0.0)) return false;
        const double l = std::sqrt(diag);
        h[j * d + j] = l;
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = h[i * d + j];
            for (std::size_t k = 0; k < j; ++k) v -= h[i * d + k] * h[j * d + k];
            h[i * d + j] = v / l;
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < i; ++k) g[i] -= h[i * d + k] * g[k];
        g[i] /= h[i * d + i];
    }
    for (std::size_t i = d; i-- > 0;) {
        for (std::size_t k = i + 1; k < d; ++k) g[i] -= h[k * d + i] * g[k];
        g[i] /= h[i * d + i];
    }
    return true;
}

// Damped Newton on the distance-sum objective, for iterates Weiszfeld left
// unconverged (typically an optimum very close to, but off, a data point).
void newton_finish(const SampleBatch& batch, double spread, double coincide, double tolerance,
                   GeoMedianResult& result) {
    const std::size_t d = batch.dim();
    Vec& y = result.point;
    double f = geometric_median_objective(batch, y);
    for (int it = 0; it < 100; ++it) {
        Vec grad(d, 0.0);
        std::vector<double> hess(d * d, 0.0);
        for (const auto& p : batch.points()) {
            const double dist = vec::distance(p, y);
            if (dist <= coincide) return;
            Vec u(d);
            for (std::size_t i = 0; i < d; ++i) u[i] = (y[i] - p[i]) / dist;
            for (std::size_t i = 0; i < d; ++i) {
                grad[i] += u[i];
                for (std::size_t k = 0; k < d; ++k) hess[i * d + k] += ((i == k ? 1.0 : 0.0) - u[i] * u[k]) / dist;
            }
        }
        if (!cholesky_solve(hess, grad, d)) return;

        double lambda = 1.0;
        Vec trial;
        double trial_f = f;
        for (int halvings = 0; halvings < 40; ++halvings, lambda *= 0.5) {
            trial = vec::axpy(y, -lambda, grad);
            trial_f = geometric_median_objective(batch, trial);
            if (trial_f <= f) break;
        }
        if (!(trial_f <= f)) return;
        const double rel = vec::distance(trial, y) / (vec::norm2(y) + spread);
        y = std::move(trial);
        f = trial_f;
        result.residual = rel;
        if (rel <= tolerance) {
            result.converged = true;
            return;
        }
    }
}

}  // namespace

GeoMedianResult geometric_median(const SampleBatch& batch, const GeoMedianSettings& settings) {
    settings.validate();
    const std::size_t d = batch.dim();

    GeoMedianResult result;
    result.point = coordinate_median(batch);
    if (batch.size() == 1) {
        result.converged = true;
        return result;
    }

    double spread = 0.0;
    for (const auto& p : batch.points()) spread += vec::distance(p, result.point);
    spread /= static_cast<double>(batch.size());
    if (spread == 0.0) {
        result.converged = true;
        return result;
    }
    const double coincide = 1e-14 * spread;

    // A data point z is the minimizer iff |sum_{p != z} (p - z)/|p - z|| <= multiplicity(z).
    // Weiszfeld only approaches such a point sublinearly, so test for it directly.
    for (const auto& z : batch.points()) {
        Vec pull(d, 0.0);
        double mass = 0.0;
        for (const auto& p : batch.points()) {
            const double dist = vec::distance(p, z);
            if (dist <= coincide) {
                mass += 1.0;
                continue;
            }
            for (std::size_t i = 0; i < d; ++i) pull[i] += (p[i] - z[i]) / dist;
        }
        if (vec::norm2(pull) <= mass) {
            result.point = z;
            result.converged = true;
            return result;
        }
    }

    Vec& y = result.point;
    Vec weighted(d);
    Vec pull(d);
    for (std::size_t it = 0; it < settings.max_iters; ++it) {
        // Weiszfeld map over the points distinct from y, plus the
        // Vardi-Zhang correction for the mass sitting exactly at y.
        std::fill(weighted.begin(), weighted.end(), 0.0);
        std::fill(pull.begin(), pull.end(), 0.0);
        double inv_sum = 0.0;
        double mass_at_y = 0.0;
        for (const auto& p : batch.points()) {
            const double dist = vec::distance(p, y);
            if (dist <= coincide) {
                mass_at_y += 1.0;
                continue;
            }
            const double w = 1.0 / dist;
            inv_sum += w;
            for (std::size_t i = 0; i < d; ++i) {
                weighted[i] += w * p[i];
                pull[i] += w * (p[i] - y[i]);
            }
        }

        Vec next(d);
        if (inv_sum == 0.0) {
            next = y;
        } else if (mass_at_y == 0.0) {
            for (std::size_t i = 0; i < d; ++i) next[i] = weighted[i] / inv_sum;
        } else {
            const double r = vec::norm2(pull);
            // r <= mass_at_y is the optimality condition at a data point.
            const double ratio = r > 0.0 ? mass_at_y / r : 1.0;
            const double keep = std::min(1.0, ratio);
            const double move = std::max(0.0, 1.0 - ratio);
            for (std::size_t i = 0; i < d; ++i) next[i] = move * (weighted[i] / inv_sum) + keep * y[i];
        }

        const double step = vec::distance(next, y);
        const double rel = step / (vec::norm2(y) + spread);
        y = std::move(next);
        result.iterations = it + 1;
        result.residual = rel;
        if (rel <= settings.tolerance) {
            result.converged = true;
            break;
        }
    }
    if (!result.converged && settings.max_iters > 1) newton_finish(batch, spread, coincide, settings.tolerance, result);
    return result;
}

AggregationResult aggregate_detailed(AggregatorKind kind, const SampleBatch& batch, const GeoMedianSettings& settings) {
    switch (kind) {
        case AggregatorKind::Mean: return {sample_mean(batch), 0.0};
        case AggregatorKind::L1Median: return {coordinate_median(batch), 0.0};
        case AggregatorKind::L2Median: {
            auto gm = geometric_median(batch, settings);
            return {std::move(gm.point), gm.residual};
        }
    }
    throw std::invalid_argument("aggregate: unknown aggregator");
}

Vec aggregate(AggregatorKind kind, const SampleBatch& batch, const GeoMedianSettings& settings) {
    return aggregate_detailed(kind, batch, settings).value;
}

}  // namespace robust_grad::aggregators
