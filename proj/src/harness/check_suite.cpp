#include "robust_grad/harness/check_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "robust_grad/estimators.hpp"
#include "robust_grad/rng.hpp"

namespace robust_grad::harness {

namespace {

constexpr double kIdentityTol = 1e-12;

struct Tuple {
    Vec m;
    Vec g;
    double tau;
    double mu;
};

double log_uniform(Rng& rng, double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform_open());
}

Tuple random_tuple(Rng& rng) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng() % 8);
    const double spread = log_uniform(rng, 0.1, 10.0);
    Tuple t{Vec(d), Vec(d), log_uniform(rng, 1e-2, 10.0), log_uniform(rng, 1e-2, 10.0)};
    for (std::size_t i = 0; i < d; ++i) {
        t.m[i] = spread * rng.normal();
        t.g[i] = spread * rng.normal();
    }
    return t;
}

double max_abs_diff(ConstVecView a, ConstVecView b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// Deviation measured against the magnitude of the inputs, floored at 1.
double scaled_diff(ConstVecView a, ConstVecView b, const Tuple& t) {
    const double scale = std::max({1.0, vec::norm_inf(t.m), vec::norm_inf(t.g)});
    return max_abs_diff(a, b) / scale;
}

CheckOutcome run_tuples(const std::string& name, const CheckOptions& opt, std::uint64_t salt, double tol,
                        const std::function<double(const Tuple&)>& deviation) {
    Rng rng = make_stream(opt.seed, Stream::Check).split(salt);
    CheckOutcome out{name, true, 0.0, ""};
    for (std::size_t k = 0; k < opt.tuples; ++k) {
        const Tuple t = random_tuple(rng);
        const double dev = deviation(t);
        out.max_error = std::max(out.max_error, std::isnan(dev) ? std::numeric_limits<double>::infinity() : dev);
    }
    out.passed = out.max_error <= tol;
    out.detail = "tolerance " + format_double(tol);
    return out;
}

estimators::EstimatorConfig spp_estimator(estimators::Method m, const Tuple& t) {
    estimators::EstimatorConfig c;
    c.method = m;
    c.tau = t.tau;
    c.mu = t.mu;
    return c;
}

Vec estimator_step(estimators::Method method, const Tuple& t) {
    return estimators::estimator_update(spp_estimator(method, t), estimators::EstimatorState{t.m, 0}, t.g).m;
}

double objective(const aggregators::SampleBatch& batch, double x, double y) {
    const Vec p{x, y};
    return aggregators::geometric_median_objective(batch, p);
}

}  // namespace

Vec grid_geometric_median_2d(const aggregators::SampleBatch& batch, std::size_t grid) {
    if (batch.dim() != 2) throw std::invalid_argument("grid_geometric_median_2d: points must be 2-D");
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-lo[0], -lo[1]};
    for (const auto& p : batch.points()) {
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    }
    // The minimizer lies in the convex hull, hence in the bounding box.
    double best_x = lo[0];
    double best_y = lo[1];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid; ++i) {
        const double x = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / static_cast<double>(grid - 1);
        for (std::size_t j = 0; j < grid; ++j) {
            const double y = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) / static_cast<double>(grid - 1);
            const double f = objective(batch, x, y);
            if (f < best) {
                best = f;
                best_x = x;
                best_y = y;
            }
        }
    }

    // Compass search with diagonal directions.
    double step = std::max(hi[0] - lo[0], hi[1] - lo[1]) / static_cast<double>(grid - 1);
    constexpr double dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    while (step > 1e-12) {
        bool improved = false;
        for (const auto& d : dirs) {
            const double x = best_x + step * d[0];
            const double y = best_y + step * d[1];
            const double f = objective(batch, x, y);
            if (f < best) {
                best = f;
                best_x = x;
                best_y = y;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    return {best_x, best_y};
}

bool CheckReport::all_passed() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const CheckOutcome& o) { return o.passed; });
}

std::vector<Row> CheckReport::rows() const {
    std::vector<Row> rows;
    for (const auto& o : outcomes) {
        rows.push_back({"check", o.name, "", 0.0, std::nullopt, std::nullopt, "passed", o.passed ? 1.0 : 0.0});
        rows.push_back({"check", o.name, "", 0.0, std::nullopt, std::nullopt, "max_error", o.max_error});
    }
    return rows;
}

CheckReport check_suite(const CheckOptions& opt) {
    using estimators::Method;
    const auto& k = opt.kernels;
    CheckReport report;

    report.outcomes.push_back(run_tuples("vclip_norm_bound", opt, 1, 1e-12, [&](const Tuple& t) {
        const Vec v = vec::sub(t.g, t.m);
        const Vec out = k.vclip(t.tau, v);
        // Excess norm beyond tau, plus any change to vectors already inside the ball.
        double dev = std::max(0.0, vec::norm2(out) - t.tau) / t.tau;
        if (vec::norm2(v) <= t.tau) dev = std::max(dev, max_abs_diff(out, v));
        return dev;
    }));

    report.outcomes.push_back(run_tuples("cclip_box_bound", opt, 2, 0.0, [&](const Tuple& t) {
        const Vec v = vec::sub(t.g, t.m);
        const Vec out = k.cclip(t.tau, v);
        double dev = std::max(0.0, vec::norm_inf(out) - t.tau);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (std::abs(v[i]) <= t.tau) dev = std::max(dev, std::abs(out[i] - v[i]));
        return dev;
    }));

    report.outcomes.push_back(run_tuples("spp_projection_l2", opt, 3, kIdentityTol, [&](const Tuple& t) {
        return scaled_diff(prox::spp_step(prox::L2{}, t.tau, t.m, t.g, k),
                           prox::spp_step_projection(prox::L2{}, t.tau, t.m, t.g), t);
    }));

    report.outcomes.push_back(run_tuples("spp_projection_l1", opt, 4, kIdentityTol, [&](const Tuple& t) {
        return scaled_diff(prox::spp_step(prox::L1{}, t.tau, t.m, t.g, k),
                           prox::spp_step_projection(prox::L1{}, t.tau, t.m, t.g), t);
    }));

    report.outcomes.push_back(run_tuples("estimator_matches_spp", opt, 5, kIdentityTol, [&](const Tuple& t) {
        double worst = 0.0;
        const std::pair<Method, prox::DistanceKind> pairs[] = {
            {Method::Momentum, prox::HalfSquaredL2{}},
            {Method::VClip, prox::L2{}},
            {Method::CClip, prox::L1{}},
            {Method::Huber, prox::Huber{t.mu}},
        };
        for (const auto& [method, kind] : pairs)
            worst = std::max(worst, scaled_diff(estimator_step(method, t), prox::spp_step(kind, t.tau, t.m, t.g, k), t));
        return worst;
    }));

    report.outcomes.push_back(run_tuples("huber_interpolation", opt, 6, kIdentityTol, [&](const Tuple& t) {
        const Vec huber = estimator_step(Method::Huber, t);
        const double gap = vec::distance(t.m, t.g);
        const double knee = t.mu * (1.0 + t.tau);
        double worst = 0.0;
        if (gap <= knee) worst = std::max(worst, scaled_diff(huber, estimator_step(Method::Momentum, t), t));
        if (gap >= knee) {
            const Vec clipped = vec::add(t.m, k.vclip(t.mu * t.tau, vec::sub(t.g, t.m)));
            worst = std::max(worst, scaled_diff(huber, clipped, t));
        }
        return worst;
    }));

    report.outcomes.push_back(run_tuples("prox_nonexpansive", opt, 7, 1e-12, [&](const Tuple& t) {
        double worst = 0.0;
        const prox::DistanceKind kinds[] = {prox::HalfSquaredL2{}, prox::L1{}, prox::L2{}, prox::Huber{t.mu}};
        const double base = vec::distance(t.m, t.g);
        for (const auto& kind : kinds) {
            const double d = vec::distance(prox::prox(kind, t.tau, t.m, k), prox::prox(kind, t.tau, t.g, k));
            worst = std::max(worst, (d - base) / std::max(1.0, base));
        }
        return std::max(0.0, worst);
    }));

    {
        Rng rng = make_stream(opt.seed, Stream::Check).split(8);
        CheckOutcome out{"geometric_median_grid_oracle", true, 0.0, "tolerance 1e-4"};
        for (std::size_t b = 0; b < opt.geo_batches; ++b) {
            std::vector<Vec> pts(5, Vec(2));
            for (auto& p : pts)
                for (auto& x : p) x = rng.uniform_open();
            const aggregators::SampleBatch batch(std::move(pts));
            const auto gm = aggregators::geometric_median(batch);
            const Vec brute = grid_geometric_median_2d(batch);
            out.max_error = std::max(out.max_error, vec::distance(gm.point, brute));
        }
        out.passed = out.max_error <= 1e-4;
        report.outcomes.push_back(out);
    }

    {
        Rng rng = make_stream(opt.seed, Stream::Check).split(9);
        CheckOutcome out{"coordinate_median_order_statistics", true, 0.0, "exact"};
        for (std::size_t b = 0; b < opt.median_batches; ++b) {
            const std::size_t n = 1 + static_cast<std::size_t>(rng() % 12);
            const std::size_t d = 1 + static_cast<std::size_t>(rng() % 4);
            std::vector<Vec> pts(n, Vec(d));
            for (auto& p : pts)
                for (auto& x : p) x = rng.normal();
            const aggregators::SampleBatch batch(pts);
            const Vec med = aggregators::coordinate_median(batch);
            for (std::size_t i = 0; i < d; ++i) {
                std::vector<double> col;
                for (const auto& p : pts) col.push_back(p[i]);
                std::sort(col.begin(), col.end());
                const double expect = n % 2 == 1 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
                out.max_error = std::max(out.max_error, std::abs(med[i] - expect));
            }
        }
        out.passed = out.max_error == 0.0;
        report.outcomes.push_back(out);
    }

    {
        Rng rng = make_stream(opt.seed, Stream::Check).split(10);
        std::vector<Vec> pts(5, Vec(2));
        for (auto& p : pts)
            for (auto& x : p) x = rng.normal();
        const aggregators::SampleBatch clean(pts);
        double range = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            double lo = pts[0][i], hi = pts[0][i];
            for (const auto& p : pts) {
                lo = std::min(lo, p[i]);
                hi = std::max(hi, p[i]);
            }
            range = std::max(range, hi - lo);
        }
        pts[0] = {1e6, 1e6};
        const aggregators::SampleBatch dirty(pts);
        const double median_shift = vec::norm_inf(vec::sub(aggregators::coordinate_median(dirty), aggregators::coordinate_median(clean)));
        const double mean_shift = vec::norm_inf(vec::sub(aggregators::sample_mean(dirty), aggregators::sample_mean(clean)));
        CheckOutcome out{"median_breakdown", median_shift < range && mean_shift > 1e5, median_shift,
                         "mean shift " + format_double(mean_shift) + ", clean range " + format_double(range)};
        report.outcomes.push_back(out);
    }

    return report;
}

}  // namespace robust_grad::harness
