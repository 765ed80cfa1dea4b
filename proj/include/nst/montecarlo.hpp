#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nst/models.hpp"

// Stochastic validation of the closed forms: grid path simulation with
// last-passage detection, exact marginal-law sampling, and estimators for
// the identities m = E[Z(1-Z)] = E[(1_{G>=t} - Z_t)^2] and m** = 1/4 = m~.

namespace nst::mc {

struct SimConfig {
    std::uint64_t seed = 1;
    long n_paths = 1000;
    double dt = 1e-3;
    double eps_stop = 1e-4;  // stop when the cap ratio falls below this
    int n_streams = 8;
    double horizon = 1e6;    // hard time cap per path

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(n)
    long n = 0;
    std::uint64_t seed = 0;
};

enum class Termination { epsilon_stop, hit_target, horizon };

struct PathRecord {
    std::vector<double> times;   // grid, increasing
    std::vector<double> values;  // process state on the grid
    std::optional<double> last_passage_time;  // on the grid when present
    Termination termination_reason = Termination::epsilon_stop;
};

// Splittable counter-seeded generator; substream i of a given seed is an
// independent stream, so estimates do not depend on scheduling.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);
    double uniform();             // (0,1)
    double normal();              // N(0,1), Marsaglia polar
    double gamma(double shape);   // shape >= 1, Marsaglia-Tsang

private:
    std::uint64_t next();
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

using PathSink = std::function<void(const PathRecord&)>;

// Exact-in-law grid simulation of M_t = exp(B_t - t/2); paths run until
// M <= eps_stop * K; last passage = last grid crossing of level K.
void simulate_exp_paths(double K, const SimConfig& cfg, const PathSink& sink);

// Brownian motion until it hits a (grid crossing plus Brownian-bridge
// correction); last passage = last zero before the hit.
void simulate_brownian_before_hit(double a, const SimConfig& cfg,
                                  const PathSink& sink);

// BES_0(d) as the norm of d-dimensional Brownian motion; requires
// d = 2(mu+1) integer. Terminates at the radius where (a/R)^{2mu} <= eps_stop.
void simulate_bessel_paths(double mu, double a, const SimConfig& cfg,
                           const PathSink& sink);

// Shared-path estimates of (E[Z_t(1-Z_t)], E[(1_{G>=t}-Z_t)^2]).
// Exp and BrownianBeforeHit only.
std::pair<McEstimate, McEstimate> estimate_m_identity(
    const model::ModelSpec& model, double t, const SimConfig& cfg);

// Discretization-free estimate from the exact marginal law of the state at t
// (lognormal for Exp, 2t * Gamma(mu+1) for the squared Bessel radius).
McEstimate estimate_m_marginal(const model::ModelSpec& model, double t, long n,
                               std::uint64_t seed);

// Path estimate of E[Z_t(1-Z_t)]; simulates only as far as t (and T_a for
// the Brownian-before-hit family).
McEstimate estimate_m_path(const model::ModelSpec& model, double t,
                           const SimConfig& cfg);

// Exact draws of (S1, B1) via the conditional tail
// P(S1 > x | B1 = a) = exp(-2x(x-a)).
std::vector<std::pair<double, double>> sample_joint_max(long n,
                                                        std::uint64_t seed);

// Mean of 1_{S1<x} 1_{B1>0} B1 (x - B1) over exact joint draws.
McEstimate estimate_phi_brownian(double x, long n, std::uint64_t seed);

// Mean over paths of the grid maximum of Z(1-Z)  (m** check).
McEstimate estimate_sup_zz(const model::ModelSpec& model, const SimConfig& cfg);

// Mean of Z_T(1-Z_T) at the first grid time with Z <= level  (m~ check).
McEstimate estimate_at_level_hit(const model::ModelSpec& model, double level,
                                 const SimConfig& cfg);

}  // namespace nst::mc
