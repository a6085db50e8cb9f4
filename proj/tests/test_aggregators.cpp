#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "robust_grad/aggregators.hpp"
#include "robust_grad/rng.hpp"

using namespace robust_grad;
using namespace robust_grad::aggregators;

namespace {

void check_vec(const Vec& got, const Vec& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (tol == 0)
            CHECK(got[i] == want[i]);
        else
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol).scale(1.0));
    }
}

std::vector<Vec> random_points(Rng& rng, std::size_t n, std::size_t d) {
    std::vector<Vec> pts(n, Vec(d));
    for (auto& p : pts)
        for (auto& x : p) x = rng.normal();
    return pts;
}

// Zooming grid search: 41x41 grid, recentre on the best node, halve the window.
Vec zoom_grid_minimizer(const SampleBatch& batch) {
    double lo_x = batch[0][0], hi_x = lo_x, lo_y = batch[0][1], hi_y = lo_y;
    for (const auto& p : batch.points()) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    }
    Vec c{(lo_x + hi_x) / 2, (lo_y + hi_y) / 2};
    double half = std::max(hi_x - lo_x, hi_y - lo_y) / 2 + 1e-3;
    for (int round = 0; round < 60; ++round) {
        Vec best = c;
        double best_f = geometric_median_objective(batch, c);
        for (int i = -20; i <= 20; ++i)
            for (int j = -20; j <= 20; ++j) {
                const Vec p{c[0] + half * i / 20.0, c[1] + half * j / 20.0};
                const double f = geometric_median_objective(batch, p);
                if (f < best_f) {
                    best_f = f;
                    best = p;
                }
            }
        c = best;
        half *= 0.5;
    }
    return c;
}

}  // namespace

TEST_CASE("mean examples") {
    check_vec(sample_mean(SampleBatch({{0, 0}, {2, 2}})), {1, 1}, 1e-15);
    check_vec(sample_mean(SampleBatch({{7, -1}})), {7, -1}, 1e-15);
    check_vec(sample_mean(SampleBatch({{1, 0}, {0, 1}, {-1, 0}, {0, -1}})), {0, 0}, 1e-15);
}

TEST_CASE("coordinate median examples") {
    CHECK(scalar_median({1, 2, 100}) == 2);
    CHECK(scalar_median({4, 1, 3, 2}) == 2.5);
    check_vec(coordinate_median(SampleBatch({{0, 0}, {1, 1}, {2, 5}})), {1, 1}, 0);
}

TEST_CASE("geometric median examples") {
    CHECK(geometric_median(SampleBatch({{0}, {1}, {10}})).point[0] == doctest::Approx(1.0));

    const double h = std::sqrt(3.0) / 2;
    const SampleBatch tri({{0, 0}, {1, 0}, {0.5, h}});
    const auto r = geometric_median(tri);
    CHECK(r.converged);
    check_vec(r.point, {0.5, h / 3}, 1e-8);
}

TEST_CASE("geometric median matches a zooming grid search in 2-D") {
    Rng rng(1);
    for (int b = 0; b < 20; ++b) {
        const SampleBatch batch(random_points(rng, 5, 2));
        const auto got = geometric_median(batch).point;
        const auto want = zoom_grid_minimizer(batch);
        CHECK(vec::distance(got, want) < 1e-4);
    }
}

TEST_CASE("coordinate median equals the middle order statistic") {
    Rng rng(2);
    for (int b = 0; b < 1000; ++b) {
        const std::size_t n = 1 + rng() % 12;
        const auto pts = random_points(rng, n, 3);
        const auto got = coordinate_median(SampleBatch(pts));
        for (std::size_t j = 0; j < 3; ++j) {
            std::vector<double> col;
            for (const auto& p : pts) col.push_back(p[j]);
            std::sort(col.begin(), col.end());
            const double want = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
            CHECK(got[j] == want);
        }
    }
}

TEST_CASE("every median coincides in one dimension") {
    Rng rng(3);
    for (int b = 0; b < 200; ++b) {
        const SampleBatch batch(random_points(rng, 1 + 2 * (rng() % 6), 1));
        CHECK(geometric_median(batch).point[0] == doctest::Approx(coordinate_median(batch)[0]).epsilon(1e-8));
    }
}

TEST_CASE("translation equivariance") {
    Rng rng(4);
    const Vec shift{100.0, -50.0, 3.0};
    for (int b = 0; b < 100; ++b) {
        auto pts = random_points(rng, 7, 3);
        auto moved = pts;
        for (auto& p : moved) p = vec::add(p, shift);
        for (auto kind : {AggregatorKind::Mean, AggregatorKind::L1Median, AggregatorKind::L2Median})
            check_vec(aggregate(kind, SampleBatch(moved)), vec::add(aggregate(kind, SampleBatch(pts)), shift), 1e-7);
    }
}

TEST_CASE("rotations commute with the geometric median but not the coordinate median") {
    Rng rng(5);
    const double th = 0.7;
    auto rotate = [&](const Vec& p) { return Vec{std::cos(th) * p[0] - std::sin(th) * p[1], std::sin(th) * p[0] + std::cos(th) * p[1]}; };
    double worst_l2 = 0, worst_l1 = 0;
    for (int b = 0; b < 100; ++b) {
        const auto pts = random_points(rng, 5, 2);
        std::vector<Vec> turned;
        for (const auto& p : pts) turned.push_back(rotate(p));
        worst_l2 = std::max(worst_l2, vec::distance(geometric_median(SampleBatch(turned)).point,
                                                    rotate(geometric_median(SampleBatch(pts)).point)));
        worst_l1 = std::max(worst_l1, vec::distance(coordinate_median(SampleBatch(turned)),
                                                    rotate(coordinate_median(SampleBatch(pts)))));
    }
    CHECK(worst_l2 < 1e-7);
    CHECK(worst_l1 > 1e-2);
}

TEST_CASE("outliers move the median boundedly and the mean linearly") {
    const std::vector<Vec> clean{{0.0}, {1.0}, {2.0}, {0.5}, {1.5}};
    const double base = coordinate_median(SampleBatch(clean))[0];
    for (double magnitude : {1e3, 1e6, 1e9}) {
        auto dirty = clean;
        dirty[0] = {magnitude};
        dirty[1] = {magnitude};
        const double kept_range = 2.0 - 0.5;
        CHECK(std::abs(coordinate_median(SampleBatch(dirty))[0] - base) <= kept_range);
        CHECK(sample_mean(SampleBatch(dirty))[0] > 0.39 * magnitude);
    }
    const SampleBatch spike({{0, 0}, {0, 0}, {1e6, 1e6}});
    check_vec(aggregate(AggregatorKind::L1Median, spike), {0, 0}, 0);
    check_vec(aggregate(AggregatorKind::Mean, spike), {1e6 / 3, 1e6 / 3}, 1e-12);
}

TEST_CASE("geometric median objective is no worse than the mean or any data point") {
    Rng rng(6);
    for (int b = 0; b < 300; ++b) {
        const SampleBatch batch(random_points(rng, 2 + rng() % 9, 1 + rng() % 5));
        const double f = geometric_median_objective(batch, geometric_median(batch).point);
        CHECK(f <= geometric_median_objective(batch, sample_mean(batch)) + 1e-9);
        for (const auto& p : batch.points()) CHECK(f <= geometric_median_objective(batch, p) + 1e-9);
    }
}

TEST_CASE("data-point optimum is handled") {
    // The heavy point at the origin is the exact minimizer; plain Weiszfeld divides by zero there.
    const SampleBatch batch({{0, 0}, {0, 0}, {0, 0}, {1, 0}, {0, 1}});
    const auto r = geometric_median(batch);
    CHECK(vec::all_finite(r.point));
    CHECK(vec::norm2(r.point) < 1e-9);
}

TEST_CASE("errors and non-convergence") {
    CHECK_THROWS_AS(SampleBatch({}), std::invalid_argument);
    CHECK_THROWS_AS(SampleBatch({{1, 2}, {3}}), std::invalid_argument);
    CHECK_THROWS_AS(aggregator_from_string("trimmed"), std::invalid_argument);
    CHECK(aggregator_from_string("l2-median") == AggregatorKind::L2Median);

    GeoMedianSettings bad;
    bad.tolerance = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Rng rng(7);
    const SampleBatch batch(random_points(rng, 9, 4));
    GeoMedianSettings one;
    one.max_iters = 1;
    const auto r = geometric_median(batch, one);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.residual > 0);
    CHECK(r.point.size() == 4);
}
