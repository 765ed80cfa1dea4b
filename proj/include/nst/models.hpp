#pragma once

#include <span>
#include <variant>
#include <vector>

#include "nst/numerics.hpp"

// Closed-form evaluation of the Azema supermartingale Z_t and of
// m(t) = E[Z_t (1 - Z_t)] for three last-passage families:
//   - last passage of the exponential martingale exp(B_t - t/2) at K <= 1
//   - last zero of Brownian motion before it first hits a > 0
//   - last passage of a Bessel process BES_0(d), d = 2(mu+1), at a > 0

namespace nst::model {

enum class Family { ExpLastPassage, BrownianBeforeHit, BesselLastPassage };

struct ModelSpec {
    Family family = Family::ExpLastPassage;
    double K = 1.0;   // ExpLastPassage, K in (0,1]
    double a = 1.0;   // level for the other two families, a > 0
    double mu = 1.0;  // Bessel index, mu > 0 (dimension d = 2(mu+1))

    static ModelSpec exp_last_passage(double K);
    static ModelSpec brownian_before_hit(double a);
    static ModelSpec bessel_last_passage(double mu, double a);

    void validate() const;  // throws std::domain_error on bad parameters
};

struct CurvePoint {
    double t;
    double m;
};

struct NstCurve {
    ModelSpec model;
    std::vector<CurvePoint> points;  // strictly increasing t, m in [0, 1/4]
};

struct SupResult {
    ModelSpec model;
    double t_star = 0.0;
    double m_star = 0.0;
    double method_tolerance = 0.0;
    bool on_edge = false;  // maximum pinned to the scan-window edge
};

struct BesselCharacteristics {
    double mu = 0.0;
    double z_mu = 0.0;
    double m_mu = 0.0;        // = sup_t m(t), independent of a by scaling
    double m_prime_mu = 0.0;  // upper bound sup_z z^mu e^-z / (2 Gamma(mu+1))
};

// Process states accepted by z_of_state.
struct ExpState { double martingale; };                  // M_t >= 0
struct BrownianHitState { double b; bool hit_target; };  // B_{t ^ Ta}
struct BesselState { double r; };                        // R_t >= 0
using ProcessState = std::variant<ExpState, BrownianHitState, BesselState>;

// Z_t from the current process state, per family.
double z_of_state(const ModelSpec& model, const ProcessState& state);

// m_K(t) for the exponential martingale family.
double m_exp(double K, double t);

// phi(x) = E[1_{S1<x} 1_{B1>0} B1 (x - B1)], x >= 0.
double phi_brownian(double x);

// m(t) for the last zero before hitting a: phi(a/sqrt t)/(a/sqrt t)^2.
double m_brownian_hit(double a, double t);

// phi_mu(z) = (z^mu e^-z - z^{2 mu} int_z^inf u^-mu e^-u du)/Gamma(mu+1).
double phi_mu(double mu, double z);

// m(t) for the Bessel family: phi_mu(a^2/(2t)).
double m_bessel(double mu, double a, double t);

// Unique positive root z_mu of 2 z e^z E_mu(z) = 1.
num::RootResult solve_z_mu(double mu);

// z_mu together with m_mu and the bound m'_mu.
BesselCharacteristics bessel_characteristics(double mu);

// Dispatcher over the three families; m(0) = 0 by continuity.
double m_of(const ModelSpec& model, double t);

// sup_t m(t): log-grid pre-scan over [1e-6, 1e6] then local refinement.
SupResult sup_m(const ModelSpec& model);

// Evenly sampled curve on [t_min, t_max].
NstCurve sample_curve(const ModelSpec& model, double t_min, double t_max,
                      int points);

struct KstarRow {
    double K;
    double t_star;
    double m_star;
};

struct KstarReport {
    std::vector<KstarRow> rows;
    bool monotone_nondecreasing = false;  // a finding, not an assertion
};

// m*(K) across a K grid, reporting whether it is nondecreasing.
KstarReport kstar_experiment(std::span<const double> k_grid);

}  // namespace nst::model
