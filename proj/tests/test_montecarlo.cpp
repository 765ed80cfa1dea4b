#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nst/models.hpp"
#include "nst/montecarlo.hpp"
#include "nst/numerics.hpp"

using namespace nst;
using namespace nst::mc;
using model::ModelSpec;

namespace {

SimConfig quick_cfg(long n_paths, double dt, std::uint64_t seed = 42) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.n_paths = n_paths;
    cfg.dt = dt;
    return cfg;
}

}  // namespace

TEST_CASE("SimConfig validation") {
    CHECK_THROWS(quick_cfg(0, 1e-3).validate());
    CHECK_THROWS(quick_cfg(10, 0.0).validate());
    SimConfig bad = quick_cfg(10, 1e-3);
    bad.eps_stop = 1.5;
    CHECK_THROWS(bad.validate());
    bad = quick_cfg(10, 1e-3);
    bad.n_streams = 0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("estimators are deterministic given the seed") {
    const auto spec = ModelSpec::exp_last_passage(0.5);
    const auto cfg = quick_cfg(2000, 1e-2, 7);
    const auto a = estimate_m_path(spec, 1.0, cfg);
    const auto b = estimate_m_path(spec, 1.0, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.n == cfg.n_paths);
    const auto m1 = estimate_m_marginal(spec, 1.0, 50000, 3);
    const auto m2 = estimate_m_marginal(spec, 1.0, 50000, 3);
    CHECK(m1.mean == m2.mean);
    const auto i1 = estimate_m_identity(spec, 1.0, cfg);
    const auto i2 = estimate_m_identity(spec, 1.0, cfg);
    CHECK(i1.first.mean == i2.first.mean);
    CHECK(i1.second.mean == i2.second.mean);
}

TEST_CASE("marginal estimator vs closed forms") {
    const auto e1 = estimate_m_marginal(ModelSpec::exp_last_passage(1.0), 1.0,
                                        200000, 11);
    CHECK(std::fabs(e1.mean - model::m_exp(1.0, 1.0)) <= 3.0 * e1.std_error);

    // Bessel at z = 0.61: closed form phi_1(0.61)
    const double t = 1.0 / (2.0 * 0.61);
    const auto eb = estimate_m_marginal(ModelSpec::bessel_last_passage(1.0, 1.0),
                                        t, 200000, 12);
    CHECK(std::fabs(eb.mean - model::phi_mu(1.0, 0.61)) <= 3.0 * eb.std_error);

    // Z ~ 1 at tiny t, so Z(1-Z) ~ 0
    const auto e0 = estimate_m_marginal(ModelSpec::exp_last_passage(0.5), 1e-8,
                                        10000, 13);
    CHECK(e0.mean <= 1e-6);

    CHECK_THROWS(estimate_m_marginal(ModelSpec::brownian_before_hit(1.0), 1.0,
                                     1000, 1));
}

TEST_CASE("identity E[Z(1-Z)] = E[(1_{G>=t}-Z)^2] on shared paths") {
    const auto spec = ModelSpec::exp_last_passage(0.5);
    const auto cfg = quick_cfg(20000, 1e-3, 21);
    for (double t : {0.2, 1.0, 5.0}) {
        const auto [zz, sq] = estimate_m_identity(spec, t, cfg);
        const double se =
            std::sqrt(zz.std_error * zz.std_error + sq.std_error * sq.std_error);
        CHECK(std::fabs(zz.mean - sq.mean) <= 3.0 * se);
        CHECK(std::fabs(zz.mean - model::m_exp(0.5, t)) <=
              3.0 * zz.std_error + 0.002);
    }
    // far beyond all activity: both sides ~ 0
    const auto [zz, sq] = estimate_m_identity(spec, 100.0, quick_cfg(2000, 1e-2, 22));
    CHECK(zz.mean < 1e-3);
    CHECK(sq.mean < 1e-3);
    // t = dt: Z ~ 1 and G > t a.s.
    const auto cfg3 = quick_cfg(5000, 1e-3, 23);
    const auto [z0, s0] = estimate_m_identity(spec, cfg3.dt, cfg3);
    CHECK(z0.mean < 5e-3);
    CHECK(s0.mean < 5e-3);
    CHECK_THROWS(estimate_m_identity(ModelSpec::bessel_last_passage(0.5, 1.0),
                                     1.0, cfg));
}

TEST_CASE("identity also holds for the before-hit family") {
    const auto spec = ModelSpec::brownian_before_hit(1.0);
    auto cfg = quick_cfg(20000, 1e-3, 31);
    cfg.horizon = 30.0;  // Bernoulli censoring covers zeros beyond it
    const auto [zz, sq] = estimate_m_identity(spec, 1.0, cfg);
    const double se =
        std::sqrt(zz.std_error * zz.std_error + sq.std_error * sq.std_error);
    CHECK(std::fabs(zz.mean - sq.mean) <= 3.0 * se);
    CHECK(std::fabs(zz.mean - model::m_brownian_hit(1.0, 1.0)) <=
          3.0 * zz.std_error + 0.002);
}

TEST_CASE("joint (S1, B1) sampler") {
    const auto draws = sample_joint_max(1000000, 5);
    double sum_s = 0.0;
    for (const auto& [s, b] : draws) {
        CHECK(s >= std::max(b, 0.0));
        sum_s += s;
    }
    // E[S1] = E|B1| = sqrt(2/pi); SE of the mean ~ 0.6/sqrt(n)
    CHECK(std::fabs(sum_s / draws.size() - std::sqrt(2.0 / M_PI)) < 3.0 * 0.61e-3);

    // conditional tail: P(S1 > 1 | B1 ~ 0.5) = exp(-2*1*(1-0.5)) = e^-1
    long in_bin = 0, tail = 0;
    for (const auto& [s, b] : draws)
        if (b > 0.45 && b < 0.55) {
            ++in_bin;
            if (s > 1.0) ++tail;
        }
    REQUIRE(in_bin > 10000);
    CHECK(std::fabs(double(tail) / in_bin - std::exp(-1.0)) < 0.02);
}

TEST_CASE("S1 law: KS distance against 2 Phi(x) - 1") {
    const long n = 100000;
    auto draws = sample_joint_max(n, 6);
    std::vector<double> s(n);
    for (long i = 0; i < n; ++i) s[i] = draws[i].first;
    std::sort(s.begin(), s.end());
    double ks = 0.0;
    for (long i = 0; i < n; ++i) {
        const double F = 2.0 * num::normal_cdf(s[i]) - 1.0;
        ks = std::max(ks, std::max(std::fabs(F - double(i) / n),
                                   std::fabs(F - double(i + 1) / n)));
    }
    CHECK(ks < 1.63 / std::sqrt(double(n)));  // 1% critical value
}

TEST_CASE("phi estimator vs the quadrature closed form") {
    const auto tiny = estimate_phi_brownian(1e-3, 50000, 7);
    CHECK(tiny.mean < 1e-5);
    for (double x : {1.0, 3.0}) {
        const auto e = estimate_phi_brownian(x, 200000, 8);
        CHECK(std::fabs(e.mean - model::phi_brownian(x)) <= 3.0 * e.std_error);
    }
}

TEST_CASE("path estimator matches closed forms for all three families") {
    const auto ee = estimate_m_path(ModelSpec::exp_last_passage(0.5), 1.0,
                                    quick_cfg(50000, 1e-3, 41));
    CHECK(std::fabs(ee.mean - model::m_exp(0.5, 1.0)) <=
          3.0 * ee.std_error + 0.002);

    const auto eb = estimate_m_path(ModelSpec::brownian_before_hit(1.0), 1.0,
                                    quick_cfg(20000, 1e-3, 42));
    CHECK(std::fabs(eb.mean - model::m_brownian_hit(1.0, 1.0)) <=
          3.0 * eb.std_error + 0.002);

    const auto es = estimate_m_path(ModelSpec::bessel_last_passage(0.5, 1.0),
                                    1.0, quick_cfg(20000, 1e-3, 43));
    CHECK(std::fabs(es.mean - model::m_bessel(0.5, 1.0, 1.0)) <=
          3.0 * es.std_error + 0.002);

    // non-integer dimension has no path construction
    CHECK_THROWS(estimate_m_path(ModelSpec::bessel_last_passage(0.7, 1.0), 1.0,
                                 quick_cfg(100, 1e-2, 44)));
}

TEST_CASE("pathwise sup of Z(1-Z)") {
    const auto spec = ModelSpec::exp_last_passage(0.5);
    const auto coarse = estimate_sup_zz(spec, quick_cfg(4000, 1e-2, 51));
    const auto fine = estimate_sup_zz(spec, quick_cfg(4000, 1e-3, 51));
    CHECK(coarse.mean <= 0.25);
    CHECK(fine.mean <= 0.25);
    CHECK(fine.mean >= coarse.mean);  // grid max grows under refinement
    CHECK(fine.mean >= 0.248);
    // the before-hit and Bessel families share the 1/4 law
    auto bcfg = quick_cfg(2000, 1e-3, 52);
    bcfg.horizon = 200.0;
    const auto bh = estimate_sup_zz(ModelSpec::brownian_before_hit(1.0), bcfg);
    CHECK(bh.mean <= 0.25);
    CHECK(bh.mean >= 0.24);
    // the per-path sup sits at the first crossing of r_half = 2a, so a
    // mild stopping level keeps the runtime down without moving the mean
    auto kcfg = quick_cfg(2000, 1e-3, 53);
    kcfg.eps_stop = 0.1;
    kcfg.horizon = 1000.0;
    const auto bes = estimate_sup_zz(ModelSpec::bessel_last_passage(0.5, 1.0), kcfg);
    CHECK(bes.mean <= 0.25);
    CHECK(bes.mean >= 0.24);
}

TEST_CASE("stopped value at a level hit") {
    const auto spec = ModelSpec::exp_last_passage(0.5);
    const auto half = estimate_at_level_hit(spec, 0.5, quick_cfg(5000, 1e-3, 61));
    CHECK(half.mean <= 0.25);
    CHECK(half.mean >= 0.2485);
    const auto nine = estimate_at_level_hit(spec, 0.9, quick_cfg(5000, 1e-3, 61));
    CHECK(nine.mean < half.mean);  // a(1-a) ordering
    // away from 1/2 the grid overshoot biases upward at rate O(sqrt(dt))
    CHECK(nine.mean > 0.09);
    CHECK(nine.mean < 0.12);
    SimConfig bad = quick_cfg(10, 1e-3);
    bad.eps_stop = 0.6;
    CHECK_THROWS(estimate_at_level_hit(spec, 0.5, bad));
}

TEST_CASE("exp path records") {
    auto cfg = quick_cfg(50, 1e-2, 71);
    cfg.eps_stop = 1e-3;
    long n = 0;
    simulate_exp_paths(0.5, cfg, [&](const PathRecord& rec) {
        ++n;
        REQUIRE(rec.times.size() == rec.values.size());
        CHECK(rec.values.front() == 1.0);
        CHECK(rec.termination_reason == Termination::epsilon_stop);
        CHECK(rec.values.back() <= cfg.eps_stop * 0.5 * 1.0001);
        REQUIRE(rec.last_passage_time.has_value());
        // on the grid
        const double steps = *rec.last_passage_time / cfg.dt;
        CHECK(std::fabs(steps - std::round(steps)) < 1e-9);
        CHECK(*rec.last_passage_time <= rec.times.back());
    });
    CHECK(n == cfg.n_paths);
}

TEST_CASE("recrossing probability after the stop is bounded by eps_stop") {
    // continue stopped paths from M = eps_stop * K; by the maximal
    // inequality the recrossing probability is eps_stop
    auto cfg = quick_cfg(400, 1e-2, 72);
    cfg.eps_stop = 0.01;
    const double lnK = std::log(0.5);
    Rng rng(99, 0);
    long recross = 0;
    for (int p = 0; p < 400; ++p) {
        double x = lnK + std::log(cfg.eps_stop);
        const double sqdt = std::sqrt(cfg.dt);
        for (int s = 0; s < 200000; ++s) {
            x += sqdt * rng.normal() - 0.5 * cfg.dt;
            if (x >= lnK) {
                ++recross;
                break;
            }
            if (x < lnK + std::log(1e-7)) break;
        }
    }
    // expectation 4; allow a generous margin
    CHECK(recross <= 15);
}

TEST_CASE("brownian before-hit path records") {
    auto cfg = quick_cfg(100, 1e-2, 73);
    cfg.horizon = 2000.0;
    long hits = 0;
    simulate_brownian_before_hit(0.5, cfg, [&](const PathRecord& rec) {
        REQUIRE(rec.times.size() == rec.values.size());
        CHECK(rec.values.front() == 0.0);
        REQUIRE(rec.last_passage_time.has_value());
        CHECK(*rec.last_passage_time <= rec.times.back());  // last zero < T_a
        if (rec.termination_reason == Termination::hit_target) ++hits;
    });
    CHECK(hits >= 95);  // T_a < infinity a.s.; horizon catches stragglers
}

TEST_CASE("bessel path records, d = 3") {
    auto cfg = quick_cfg(50, 1e-2, 74);
    cfg.eps_stop = 0.05;
    long n = 0;
    simulate_bessel_paths(0.5, 1.0, cfg, [&](const PathRecord& rec) {
        ++n;
        CHECK(rec.values.front() == 0.0);
        for (double r : rec.values) CHECK(r >= 0.0);
        CHECK(rec.termination_reason == Termination::epsilon_stop);  // transient
        REQUIRE(rec.last_passage_time.has_value());
    });
    CHECK(n == 50);
    CHECK_THROWS(simulate_bessel_paths(0.7, 1.0, cfg, [](const PathRecord&) {}));
}
