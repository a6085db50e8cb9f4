#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "robust_grad/aggregators.hpp"
#include "robust_grad/estimators.hpp"
#include "robust_grad/problems.hpp"

using namespace robust_grad;
using namespace robust_grad::estimators;

namespace {

void check_vec(const Vec& got, const Vec& want, double tol = 1e-12) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(tol).scale(1.0));
}

EstimatorConfig make(Method m, double tau = 0.5) {
    EstimatorConfig c;
    c.method = m;
    c.tau = tau;
    c.mu = 1.0;
    c.beta = 0.9;
    c.c = 1.0;
    return c;
}

Vec step(const EstimatorConfig& c, const Vec& m, const Vec& g) { return estimator_update(c, EstimatorState{m, 0}, g).m; }

const Method kAll[] = {Method::Momentum, Method::VClip,      Method::CClip,       Method::Huber,
                       Method::ClippedSGD, Method::SignL1, Method::NormalizedL2};

// Dirac oracle: every sample is the target.
class NoiselessOracle final : public problems::GradientOracle {
public:
    explicit NoiselessOracle(Vec target) : target_(std::move(target)) {}
    std::size_t dim() const override { return target_.size(); }
    double loss(ConstVecView w) const override { return vec::dot(target_, w); }
    Vec true_gradient(ConstVecView) const override { return target_; }
    Vec sample(ConstVecView, Rng&) const override { return target_; }

private:
    Vec target_;
};

}  // namespace

TEST_CASE("update examples") {
    check_vec(step(make(Method::VClip, 1), {0, 0}, {3, 4}), {0.6, 0.8});

    auto clipped = make(Method::ClippedSGD);
    clipped.beta = 0.9;
    clipped.c = 1;
    check_vec(step(clipped, {1, 0}, {3, 4}), {0.96, 0.08});

    auto huber = make(Method::Huber, 1);
    huber.mu = 1;
    check_vec(step(huber, {4, 0}, {0, 0}), {3, 0});

    check_vec(step(make(Method::SignL1, 0.1), {0, 0}, {5, -2}), {0.1, -0.1});
    check_vec(step(make(Method::Momentum, 1), {0, 0}, {2, 2}), {1, 1});
    check_vec(step(make(Method::NormalizedL2, 0.5), {0, 0}, {3, 4}), {0.3, 0.4});
}

TEST_CASE("a sample equal to the estimate is a fixed point") {
    const Vec g{0.3, -0.2};  // inside the ClippedSGD ball so its target is g itself
    for (Method m : kAll) {
        CAPTURE(to_string(m));
        auto c = make(m);
        if (m == Method::ClippedSGD) c.beta = 0.5;
        check_vec(step(c, g, g), g);
    }
}

TEST_CASE("missing hyperparameters are reported") {
    EstimatorConfig c;
    c.method = Method::VClip;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.tau = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.tau = 1;
    CHECK_NOTHROW(c.validate());

    EstimatorConfig s;
    s.method = Method::ClippedSGD;
    s.beta = 0.9;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.c = 1;
    CHECK_NOTHROW(s.validate());
    s.beta = 1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    EstimatorConfig h;
    h.method = Method::Huber;
    h.tau = 1;
    CHECK(h.huber_mu() == kDefaultHuberMu);
    h.mu = 0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);

    CHECK_THROWS_AS(step(make(Method::VClip), {0, 0}, {1}), std::invalid_argument);
}

TEST_CASE("method names round-trip") {
    for (Method m : kAll) CHECK(method_from_string(to_string(m)) == m);
    CHECK(method_from_string("Clipped_SGD") == Method::ClippedSGD);
    CHECK_THROWS_AS(method_from_string("adam"), std::invalid_argument);
}

TEST_CASE("cold start reduces clipping estimators to gradient clipping") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        Vec m(4), g(4);
        for (auto& x : m) x = 3 * rng.normal();
        for (auto& x : g) x = 3 * rng.normal();

        auto v = make(Method::VClip, 0.7);
        v.cold_start = true;
        check_vec(step(v, m, g), prox::vclip(0.7, g));

        auto s = make(Method::ClippedSGD);
        s.beta = 0.0;
        s.c = 2.0;
        check_vec(step(s, m, g), vec::scaled(g, std::min(1.0, 2.0 / vec::norm2(g))));
    }
}

TEST_CASE("momentum coefficient lies in (0, 1) for every tau") {
    for (double tau : {1e-6, 0.01, 1.0, 100.0, 1e6}) {
        const auto next = step(make(Method::Momentum, tau), {1.0}, {0.0});
        CHECK(next[0] > 0.0);
        CHECK(next[0] < 1.0);
    }
}

TEST_CASE("shifting every input shifts every estimate") {
    Rng rng(2);
    const Vec shift{10.0, -3.0, 0.5};
    for (Method m : kAll) {
        if (m == Method::ClippedSGD) continue;
        CAPTURE(to_string(m));
        EstimatorState aligned{shift, 0};
        EstimatorState plain{Vec(3, 0.0), 0};
        for (int t = 0; t < 50; ++t) {
            Vec g(3);
            for (auto& x : g) x = 2 * rng.normal();
            plain = estimator_update(make(m, 0.3), plain, g);
            aligned = estimator_update(make(m, 0.3), aligned, vec::add(g, shift));
            check_vec(aligned.m, vec::add(plain.m, shift), 1e-10);
        }
    }
}

TEST_CASE("update stays on the segment between m and the sample") {
    Rng rng(3);
    for (Method method : {Method::Momentum, Method::VClip, Method::Huber, Method::ClippedSGD}) {
        CAPTURE(to_string(method));
        for (int i = 0; i < 500; ++i) {
            Vec m(3), g(3);
            for (auto& x : m) x = 3 * rng.normal();
            for (auto& x : g) x = 3 * rng.normal();
            auto c = make(method, 0.1 + rng.uniform_open());
            Vec target = g;
            if (method == Method::ClippedSGD) target = vec::scaled(g, std::min(1.0, *c.c / vec::norm2(g)));
            const auto next = step(c, m, g);
            const Vec d = vec::sub(target, m);
            const double lambda = vec::dot(vec::sub(next, m), d) / vec::squared_norm(d);
            CHECK(lambda >= -1e-12);
            CHECK(lambda <= 1 + 1e-12);
            check_vec(next, vec::axpy(m, lambda, d), 1e-9);
        }
    }
}

TEST_CASE("increment bounds") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        Vec m(5), g(5);
        for (auto& x : m) x = 5 * rng.normal();
        for (auto& x : g) x = 5 * rng.normal();
        const double tau = std::exp(rng.normal());
        CHECK(vec::distance(step(make(Method::VClip, tau), m, g), m) <= tau * (1 + 1e-12));
        CHECK(vec::distance(step(make(Method::NormalizedL2, tau), m, g), m) <= tau * (1 + 1e-12));
        CHECK(vec::norm_inf(vec::sub(step(make(Method::CClip, tau), m, g), m)) <= tau * (1 + 1e-12));
        CHECK(vec::norm_inf(vec::sub(step(make(Method::SignL1, tau), m, g), m)) <= tau * (1 + 1e-12));
    }
}

TEST_CASE("estimators agree with the corresponding SPP step") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        Vec m(4), g(4);
        for (auto& x : m) x = 4 * rng.normal();
        for (auto& x : g) x = 4 * rng.normal();
        const double tau = std::exp(rng.normal());
        for (Method method : {Method::Momentum, Method::VClip, Method::CClip, Method::Huber}) {
            auto c = make(method, tau);
            c.mu = 0.5 + rng.uniform_open();
            check_vec(step(c, m, g), prox::spp_step(*c.distance(), tau, m, g));
        }
    }
}

TEST_CASE("noiseless estimation dynamics") {
    const Vec target{3.0, -4.0};
    NoiselessOracle oracle(target);
    Rng rng(0);

    SUBCASE("momentum with tau 1 halves the error each step") {
        const auto e = run_estimation(make(Method::Momentum, 1.0), oracle, 20, rng);
        CHECK(e[0] == doctest::Approx(0.5));
        for (std::size_t t = 1; t < e.size(); ++t) CHECK(e[t] == doctest::Approx(e[t - 1] / 2));
    }

    SUBCASE("vclip walks tau per step then lands") {
        const double tau = 0.75;  // |target| = 5
        const auto e = run_estimation(make(Method::VClip, tau), oracle, 10, rng);
        for (std::size_t t = 0; t < 6; ++t) CHECK(e[t] * 5 == doctest::Approx(5 - tau * static_cast<double>(t + 1)));
        for (std::size_t t = 6; t < e.size(); ++t) CHECK(e[t] == 0.0);
    }

    CHECK_THROWS_AS(run_estimation(make(Method::VClip), oracle, 0, rng), std::invalid_argument);
}

TEST_CASE("SPP with a norm distance estimates the median of a three-point law") {
    // Objective F(m) = E |m - g|_2 over three equally likely points; VClip is the
    // SPP method for it. Averaged iterate gap: small tau and long run beat the reverse.
    const std::vector<Vec> pts{{0.0, 0.0}, {4.0, 0.0}, {0.0, 3.0}};
    const aggregators::SampleBatch batch(pts);
    const double best = aggregators::geometric_median_objective(batch, aggregators::geometric_median(batch).point);

    auto gap = [&](std::size_t T, double tau) {
        double total = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            Estimator est(make(Method::VClip, tau), 2);
            Vec avg(2, 0.0);
            for (std::size_t t = 0; t < T; ++t) {
                est.update(pts[rng() % 3]);
                avg = vec::axpy(avg, 1.0 / static_cast<double>(T), est.estimate());
            }
            total += aggregators::geometric_median_objective(batch, avg) - best;
        }
        return total / 20;
    };
    const double coarse = gap(100, 0.1), fine = gap(10'000, 0.01);
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(fine >= 0.0);
    CHECK(fine < coarse);
}
