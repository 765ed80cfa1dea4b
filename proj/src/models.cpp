#include "nst/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nst::model {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

double clamp_unit_quarter(double m) {
    // floating cancellation near t=0 can give ~ -1e-16
    if (m < 0.0 && m > -1e-15) return 0.0;
    return m;
}

}  // namespace

ModelSpec ModelSpec::exp_last_passage(double K) {
    ModelSpec s;
    s.family = Family::ExpLastPassage;
    s.K = K;
    s.validate();
    return s;
}

ModelSpec ModelSpec::brownian_before_hit(double a) {
    ModelSpec s;
    s.family = Family::BrownianBeforeHit;
    s.a = a;
    s.validate();
    return s;
}

ModelSpec ModelSpec::bessel_last_passage(double mu, double a) {
    ModelSpec s;
    s.family = Family::BesselLastPassage;
    s.mu = mu;
    s.a = a;
    s.validate();
    return s;
}

void ModelSpec::validate() const {
    switch (family) {
        case Family::ExpLastPassage:
            if (!(K > 0.0 && K <= 1.0))
                throw std::domain_error("ModelSpec: K must be in (0,1]");
            break;
        case Family::BrownianBeforeHit:
            if (!(a > 0.0))
                throw std::domain_error("ModelSpec: a must be > 0");
            break;
        case Family::BesselLastPassage:
            if (!(mu > 0.0))
                throw std::domain_error("ModelSpec: mu must be > 0");
            if (!(a > 0.0))
                throw std::domain_error("ModelSpec: a must be > 0");
            break;
    }
}

double z_of_state(const ModelSpec& model, const ProcessState& state) {
    model.validate();
    switch (model.family) {
        case Family::ExpLastPassage: {
            const auto* s = std::get_if<ExpState>(&state);
            if (!s) throw std::invalid_argument("z_of_state: expected ExpState");
            if (s->martingale < 0.0)
                throw std::domain_error("z_of_state: M_t must be >= 0");
            return std::min(s->martingale / model.K, 1.0);
        }
        case Family::BrownianBeforeHit: {
            const auto* s = std::get_if<BrownianHitState>(&state);
            if (!s)
                throw std::invalid_argument("z_of_state: expected BrownianHitState");
            if (s->hit_target) return 0.0;
            const double bp = std::max(s->b, 0.0);
            return std::max(1.0 - bp / model.a, 0.0);
        }
        case Family::BesselLastPassage: {
            const auto* s = std::get_if<BesselState>(&state);
            if (!s)
                throw std::invalid_argument("z_of_state: expected BesselState");
            if (s->r < 0.0)
                throw std::domain_error("z_of_state: R_t must be >= 0");
            if (s->r == 0.0) return 1.0;
            const double ratio = model.a / s->r;
            if (ratio >= 1.0) return 1.0;
            return std::pow(ratio, 2.0 * model.mu);
        }
    }
    throw std::logic_error("z_of_state: unreachable");
}

double m_exp(double K, double t) {
    if (!(K > 0.0 && K <= 1.0)) throw std::domain_error("m_exp: K must be in (0,1]");
    if (!(t >= 0.0)) throw std::domain_error("m_exp: t must be >= 0");
    if (t == 0.0) return 0.0;
    const double l = std::log(K);
    const double st = std::sqrt(t);
    const double d1 = -1.5 * st + l / st;
    const double d2 = -0.5 * st + l / st;
    // e^{-l} Phi(d2) - e^{t-2l} Phi(d1); d1 < 0 always, so the second
    // product routes through the stabilized form.
    const double m = std::exp(-l) * num::normal_cdf(d2) -
                     num::phi_times_exp(d1, t - 2.0 * l);
    return clamp_unit_quarter(m);
}

double phi_brownian(double x) {
    if (!(x >= 0.0)) throw std::domain_error("phi_brownian: x must be >= 0");
    if (x == 0.0) return 0.0;
    const auto integrand = [x](double u) {
        const double du = 2.0 - u;
        return u * (1.0 - u) * (std::exp(-0.5 * x * x * u * u) -
                                std::exp(-0.5 * x * x * du * du));
    };
    double integral;
    if (x > 10.0) {
        // the mass sits in u ~ O(1/x); integrate the spike separately
        const double cut = std::min(1.0, 12.0 / x);
        integral = num::adaptive_quad(integrand, 0.0, cut, 1e-13).value;
        if (cut < 1.0)
            integral += num::adaptive_quad(integrand, cut, 1.0, 1e-13).value;
    } else {
        integral = num::adaptive_quad(integrand, 0.0, 1.0, 1e-13).value;
    }
    return x * x * x / std::sqrt(kTwoPi) * integral;
}

double m_brownian_hit(double a, double t) {
    if (!(a > 0.0)) throw std::domain_error("m_brownian_hit: a must be > 0");
    if (!(t > 0.0)) throw std::domain_error("m_brownian_hit: t must be > 0");
    const double x = a / std::sqrt(t);
    return phi_brownian(x) / (x * x);
}

double phi_mu(double mu, double z) {
    if (!(mu > 0.0)) throw std::domain_error("phi_mu: mu must be > 0");
    if (!(z >= 0.0)) throw std::domain_error("phi_mu: z must be >= 0");
    if (z == 0.0) return 0.0;
    // z^mu e^-z (1 - z e^z E_mu(z)) / Gamma(mu+1), with the scaled E so the
    // tail never hits 0 * inf.
    const double scaled = num::exp_integral_scaled(mu, z);
    const double lead = mu * std::log(z) - z - num::log_gamma(mu + 1.0);
    const double m = std::exp(lead) * (1.0 - z * scaled);
    return std::max(m, 0.0);
}

double m_bessel(double mu, double a, double t) {
    if (!(mu > 0.0)) throw std::domain_error("m_bessel: mu must be > 0");
    if (!(a > 0.0)) throw std::domain_error("m_bessel: a must be > 0");
    if (!(t > 0.0)) throw std::domain_error("m_bessel: t must be > 0");
    return phi_mu(mu, a * a / (2.0 * t));
}

num::RootResult solve_z_mu(double mu) {
    if (!(mu > 0.0)) throw std::domain_error("solve_z_mu: mu must be > 0");
    const auto g = [mu](double z) {
        return 2.0 * z * num::exp_integral_scaled(mu, z) - 1.0;
    };
    const double hi = std::max(10.0, 4.0 * mu);
    auto res = num::brent_root(g, 1e-6, hi, 1e-14, 300);
    res.residual = g(res.root);
    return res;
}

BesselCharacteristics bessel_characteristics(double mu) {
    const auto root = solve_z_mu(mu);
    const double lg = num::log_gamma(mu + 1.0);
    BesselCharacteristics c;
    c.mu = mu;
    c.z_mu = root.root;
    c.m_mu = 0.5 * std::exp(mu * std::log(root.root) - root.root - lg);
    c.m_prime_mu = 0.5 * std::exp(mu * std::log(mu) - mu - lg);
    return c;
}

double m_of(const ModelSpec& model, double t) {
    model.validate();
    if (!(t >= 0.0)) throw std::domain_error("m_of: t must be >= 0");
    if (t == 0.0) return 0.0;
    switch (model.family) {
        case Family::ExpLastPassage:
            return m_exp(model.K, t);
        case Family::BrownianBeforeHit:
            return m_brownian_hit(model.a, t);
        case Family::BesselLastPassage:
            return m_bessel(model.mu, model.a, t);
    }
    throw std::logic_error("m_of: unreachable");
}

SupResult sup_m(const ModelSpec& model) {
    model.validate();
    constexpr int kGrid = 200;
    const double lo = 1e-6, hi = 1e6;
    const double lstep = std::log(hi / lo) / (kGrid - 1);
    int best = 0;
    double best_m = -1.0;
    for (int i = 0; i < kGrid; ++i) {
        const double t = lo * std::exp(i * lstep);
        const double m = m_of(model, t);
        if (m > best_m) {
            best_m = m;
            best = i;
        }
    }
    const double bl = lo * std::exp(std::max(best - 1, 0) * lstep);
    const double bh = lo * std::exp(std::min(best + 1, kGrid - 1) * lstep);
    const auto mx = num::maximize_1d([&](double t) { return m_of(model, t); },
                                     bl, bh, 1e-8);
    SupResult res;
    res.model = model;
    res.t_star = mx.argmax;
    res.m_star = std::min(mx.max_value, 0.25);
    res.method_tolerance = 1e-8;
    res.on_edge = (best == 0 || best == kGrid - 1);
    return res;
}

NstCurve sample_curve(const ModelSpec& model, double t_min, double t_max,
                      int points) {
    model.validate();
    if (!(t_min >= 0.0 && t_min < t_max))
        throw std::domain_error("sample_curve: need 0 <= t_min < t_max");
    if (points < 2) throw std::domain_error("sample_curve: points must be >= 2");
    NstCurve curve;
    curve.model = model;
    curve.points.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double t = t_min + (t_max - t_min) * i / (points - 1);
        curve.points.push_back({t, m_of(model, t)});
    }
    return curve;
}

KstarReport kstar_experiment(std::span<const double> k_grid) {
    if (k_grid.empty()) throw std::invalid_argument("kstar_experiment: empty grid");
    for (size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0 && k_grid[i] <= 1.0))
            throw std::domain_error("kstar_experiment: K values must be in (0,1]");
        if (i > 0 && !(k_grid[i] > k_grid[i - 1]))
            throw std::domain_error("kstar_experiment: K grid must increase");
    }
    KstarReport rep;
    rep.monotone_nondecreasing = true;
    for (double K : k_grid) {
        const auto s = sup_m(ModelSpec::exp_last_passage(K));
        if (!rep.rows.empty() &&
            s.m_star < rep.rows.back().m_star - 1e-12)
            rep.monotone_nondecreasing = false;
        rep.rows.push_back({K, s.t_star, s.m_star});
    }
    return rep;
}

}  // namespace nst::model
