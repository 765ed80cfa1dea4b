#include "nst/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nst::mc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

struct Acc {
    double sum = 0.0, sumsq = 0.0;
    long n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    void merge(const Acc& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
    }
    McEstimate estimate(std::uint64_t seed) const {
        McEstimate e;
        e.n = n;
        e.seed = seed;
        e.mean = sum / n;
        if (n > 1) {
            const double var = std::max(0.0, (sumsq - n * e.mean * e.mean) / (n - 1));
            e.std_error = std::sqrt(var / n);
        }
        return e;
    }
};

long paths_in_stream(long n_paths, int n_streams, int i) {
    return n_paths / n_streams + (i < n_paths % n_streams ? 1 : 0);
}

int bessel_dimension(double mu) {
    const double d = 2.0 * (mu + 1.0);
    const double dr = std::nearbyint(d);
    if (std::fabs(d - dr) > 1e-9 || dr < 1.0)
        throw std::invalid_argument(
            "bessel path simulation needs integer dimension d = 2(mu+1)");
    return static_cast<int>(dr);
}

}  // namespace

void SimConfig::validate() const {
    if (n_paths < 1) throw std::invalid_argument("SimConfig: n_paths < 1");
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt <= 0");
    if (!(eps_stop > 0.0 && eps_stop < 1.0))
        throw std::invalid_argument("SimConfig: eps_stop outside (0,1)");
    if (n_streams < 1) throw std::invalid_argument("SimConfig: n_streams < 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("SimConfig: horizon <= 0");
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    for (auto& s : s_) s = splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
}

double Rng::gamma(double shape) {
    if (!(shape >= 1.0)) throw std::invalid_argument("Rng::gamma: shape < 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// ---------------------------------------------------------------------------
// streamed PathRecord simulators

void simulate_exp_paths(double K, const SimConfig& cfg, const PathSink& sink) {
    cfg.validate();
    if (!(K > 0.0 && K <= 1.0))
        throw std::domain_error("simulate_exp_paths: K must be in (0,1]");
    const double lnK = std::log(K);
    const double stop_x = lnK + std::log(cfg.eps_stop);
    const double sqdt = std::sqrt(cfg.dt), half = 0.5 * cfg.dt;
    const long max_steps = static_cast<long>(cfg.horizon / cfg.dt);
    long path = 0;
    for (int i = 0; i < cfg.n_streams; ++i) {
        Rng rng(cfg.seed, i);
        for (long p = paths_in_stream(cfg.n_paths, cfg.n_streams, i); p > 0;
             --p, ++path) {
            PathRecord rec;
            rec.times.push_back(0.0);
            rec.values.push_back(1.0);
            double x = 0.0;
            bool above = x >= lnK;
            rec.termination_reason = Termination::horizon;
            for (long step = 1; step <= max_steps; ++step) {
                x += sqdt * rng.normal() - half;
                rec.times.push_back(step * cfg.dt);
                rec.values.push_back(std::exp(x));
                const bool ab = x >= lnK;
                if (ab != above) {
                    rec.last_passage_time = step * cfg.dt;
                    above = ab;
                }
                if (x <= stop_x) {
                    rec.termination_reason = Termination::epsilon_stop;
                    break;
                }
            }
            sink(rec);
        }
    }
}

void simulate_brownian_before_hit(double a, const SimConfig& cfg,
                                  const PathSink& sink) {
    cfg.validate();
    if (!(a > 0.0))
        throw std::domain_error("simulate_brownian_before_hit: a must be > 0");
    const double sqdt = std::sqrt(cfg.dt);
    const long max_steps = static_cast<long>(cfg.horizon / cfg.dt);
    for (int i = 0; i < cfg.n_streams; ++i) {
        Rng rng(cfg.seed, i);
        for (long p = paths_in_stream(cfg.n_paths, cfg.n_streams, i); p > 0; --p) {
            PathRecord rec;
            rec.times.push_back(0.0);
            rec.values.push_back(0.0);
            rec.last_passage_time = 0.0;  // B_0 = 0
            double b = 0.0;
            rec.termination_reason = Termination::horizon;
            for (long step = 1; step <= max_steps; ++step) {
                const double prev = b;
                b += sqdt * rng.normal();
                rec.times.push_back(step * cfg.dt);
                rec.values.push_back(b);
                if ((prev < 0.0) != (b < 0.0))
                    rec.last_passage_time = step * cfg.dt;
                if (b >= a) {
                    rec.termination_reason = Termination::hit_target;
                    break;
                }
                // Brownian-bridge probability of an unseen intra-step hit
                const double q = (a - prev) * (a - b);
                if (q < 10.0 * cfg.dt &&
                    rng.uniform() < std::exp(-2.0 * q / cfg.dt)) {
                    rec.termination_reason = Termination::hit_target;
                    break;
                }
            }
            sink(rec);
        }
    }
}

void simulate_bessel_paths(double mu, double a, const SimConfig& cfg,
                           const PathSink& sink) {
    cfg.validate();
    if (!(mu > 0.0 && a > 0.0))
        throw std::domain_error("simulate_bessel_paths: need mu > 0, a > 0");
    const int d = bessel_dimension(mu);
    const double stop_r = a * std::pow(cfg.eps_stop, -1.0 / (2.0 * mu));
    const double sqdt = std::sqrt(cfg.dt);
    const long max_steps = static_cast<long>(cfg.horizon / cfg.dt);
    std::vector<double> w(d);
    for (int i = 0; i < cfg.n_streams; ++i) {
        Rng rng(cfg.seed, i);
        for (long p = paths_in_stream(cfg.n_paths, cfg.n_streams, i); p > 0; --p) {
            PathRecord rec;
            std::fill(w.begin(), w.end(), 0.0);
            rec.times.push_back(0.0);
            rec.values.push_back(0.0);
            double r = 0.0;
            rec.termination_reason = Termination::horizon;
            for (long step = 1; step <= max_steps; ++step) {
                double r2 = 0.0;
                for (int k = 0; k < d; ++k) {
                    w[k] += sqdt * rng.normal();
                    r2 += w[k] * w[k];
                }
                const double prev = r;
                r = std::sqrt(r2);
                rec.times.push_back(step * cfg.dt);
                rec.values.push_back(r);
                if ((prev < a) != (r < a)) rec.last_passage_time = step * cfg.dt;
                if (r >= stop_r) {
                    rec.termination_reason = Termination::epsilon_stop;
                    break;
                }
            }
            sink(rec);
        }
    }
}

// ---------------------------------------------------------------------------
// estimators

std::pair<McEstimate, McEstimate> estimate_m_identity(
    const model::ModelSpec& model, double t, const SimConfig& cfg) {
    cfg.validate();
    model.validate();
    if (!(t > 0.0)) throw std::domain_error("estimate_m_identity: t must be > 0");
    const long it = std::max<long>(1, std::llround(t / cfg.dt));
    const double tq = it * cfg.dt;
    const long max_steps = static_cast<long>(cfg.horizon / cfg.dt);
    Acc zz, sq;

    if (model.family == model::Family::ExpLastPassage) {
        const double lnK = std::log(model.K);
        const double stop_x = lnK + std::log(cfg.eps_stop);
        const double sqdt = std::sqrt(cfg.dt), half = 0.5 * cfg.dt;
        for (int i = 0; i < cfg.n_streams; ++i) {
            Rng rng(cfg.seed, i);
            Acc a1, a2;
            for (long p = paths_in_stream(cfg.n_paths, cfg.n_streams, i); p > 0;
                 --p) {
                double x = 0.0;
                bool above = x >= lnK;
                double last_cross = -1.0;
                double zt = 1.0;
                for (long step = 1; step <= max_steps; ++step) {
                    x += sqdt * rng.normal() - half;
                    const bool ab = x >= lnK;
                    if (ab != above) {
                        last_cross = step * cfg.dt;
                        above = ab;
                    }
                    if (step == it) zt = std::min(std::exp(x - lnK), 1.0);
                    if (x <= stop_x && step >= it) break;
                }
                const double ind = last_cross >= tq - 1e-12 ? 1.0 : 0.0;
                a1.add(zt * (1.0 - zt));
                a2.add((ind - zt) * (ind - zt));
            }
            zz.merge(a1);
            sq.merge(a2);
        }
    } else if (model.family == model::Family::BrownianBeforeHit) {
        const double a = model.a;
        const double sqdt = std::sqrt(cfg.dt);
        for (int i = 0; i < cfg.n_streams; ++i) {
            Rng rng(cfg.seed, i);
            Acc a1, a2;
            for (long p = paths_in_stream(cfg.n_paths, cfg.n_streams, i); p > 0;
                 --p) {
                double b = 0.0;
                double last_zero = 0.0;
                double zt = 1.0;
                bool hit = false;
                long step = 1;
                for (; step <= max_steps; ++step) {
                    const double prev = b;
                    b += sqdt * rng.normal();
                    if ((prev < 0.0) != (b < 0.0)) last_zero = step * cfg.dt;
                    if (step == it) zt = 1.0 - std::max(b, 0.0) / a;
                    if (b >= a) {
                        hit = true;
                    } else {
                        const double q = (a - prev) * (a - b);
                        if (q < 10.0 * cfg.dt &&
                            rng.uniform() < std::exp(-2.0 * q / cfg.dt))
                            hit = true;
                    }
                    if (hit) break;
                }
                if (hit && step <= it) zt = 0.0;
                double ind = last_zero >= tq - 1e-12 ? 1.0 : 0.0;
                if (!hit) {
                    // censored at the horizon: a further zero occurs before
                    // T_a with probability 1 - B^+/a, exactly
                    const double p_zero = 1.0 - std::max(b, 0.0) / a;
                    if (rng.uniform() < p_zero) ind = 1.0;
                }
                zt = std::max(std::min(zt, 1.0), 0.0);
                a1.add(zt * (1.0 - zt));
                a2.add((ind - zt) * (ind - zt));
            }
            zz.merge(a1);
            sq.merge(a2);
        }
    } else {
        throw std::invalid_argument(
            "estimate_m_identity: Bessel paths lack a grid last-passage; use "
            "the marginal estimator");
    }
    return {zz.estimate(cfg.seed), sq.estimate(cfg.seed)};
}

McEstimate estimate_m_marginal(const model::ModelSpec& model, double t, long n,
                               std::uint64_t seed) {
    model.validate();
    if (!(t > 0.0)) throw std::domain_error("estimate_m_marginal: t must be > 0");
    if (n < 1) throw std::invalid_argument("estimate_m_marginal: n < 1");
    Rng rng(seed, 0);
    Acc acc;
    const double sqt = std::sqrt(t);
    switch (model.family) {
        case model::Family::ExpLastPassage:
            for (long i = 0; i < n; ++i) {
                const double m = std::exp(sqt * rng.normal() - 0.5 * t);
                const double z = std::min(m / model.K, 1.0);
                acc.add(z * (1.0 - z));
            }
            break;
        case model::Family::BesselLastPassage:
            for (long i = 0; i < n; ++i) {
                // R_t^2 = 2 t Gamma(mu+1) in law
                const double g = rng.gamma(model.mu + 1.0);
                const double ratio = model.a * model.a / (2.0 * t * g);
                const double z = ratio >= 1.0 ? 1.0 : std::pow(ratio, model.mu);
                acc.add(z * (1.0 - z));
            }
            break;
        case model::Family::BrownianBeforeHit:
            throw std::invalid_argument(
                "estimate_m_marginal: marginal of B_t does not determine Z_t "
                "for the before-hit family");
    }
    return acc.estimate(seed);
}

McEstimate estimate_m_path(const model::ModelSpec& model, double t,
                           const SimConfig& cfg) {
    cfg.validate();
    model.validate();
    if (!(t > 0.0)) throw std::domain_error("estimate_m_path: t must be > 0");
    const long it = std::max<long>(1, std::llround(t / cfg.dt));
    Acc total;
    const double sqdt = std::sqrt(cfg.dt);

    for (int i = 0; i < cfg.n_streams; ++i) {
        Rng rng(cfg.seed, i);
        Acc acc;
        const long np = paths_in_stream(cfg.n_paths, cfg.n_streams, i);
        switch (model.family) {
            case model::Family::ExpLastPassage: {
                const double lnK = std::log(model.K);
                const double half = 0.5 * cfg.dt;
                for (long p = 0; p < np; ++p) {
                    double x = 0.0;
                    for (long s = 0; s < it; ++s) x += sqdt * rng.normal() - half;
                    const double z = std::min(std::exp(x - lnK), 1.0);
                    acc.add(z * (1.0 - z));
                }
                break;
            }
            case model::Family::BrownianBeforeHit: {
                const double a = model.a;
                for (long p = 0; p < np; ++p) {
                    double b = 0.0;
                    bool hit = false;
                    for (long s = 0; s < it && !hit; ++s) {
                        const double prev = b;
                        b += sqdt * rng.normal();
                        if (b >= a) {
                            hit = true;
                        } else {
                            const double q = (a - prev) * (a - b);
                            if (q < 10.0 * cfg.dt &&
                                rng.uniform() < std::exp(-2.0 * q / cfg.dt))
                                hit = true;
                        }
                    }
                    const double z =
                        hit ? 0.0
                            : std::max(1.0 - std::max(b, 0.0) / a, 0.0);
                    acc.add(z * (1.0 - z));
                }
                break;
            }
            case model::Family::BesselLastPassage: {
                const int d = bessel_dimension(model.mu);
                std::vector<double> w(d);
                for (long p = 0; p < np; ++p) {
                    std::fill(w.begin(), w.end(), 0.0);
                    for (long s = 0; s < it; ++s)
                        for (int k = 0; k < d; ++k) w[k] += sqdt * rng.normal();
                    double r2 = 0.0;
                    for (int k = 0; k < d; ++k) r2 += w[k] * w[k];
                    const double ratio = model.a * model.a / r2;
                    const double z =
                        ratio >= 1.0 ? 1.0 : std::pow(ratio, model.mu);
                    acc.add(z * (1.0 - z));
                }
                break;
            }
        }
        total.merge(acc);
    }
    return total.estimate(cfg.seed);
}

std::vector<std::pair<double, double>> sample_joint_max(long n,
                                                        std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_joint_max: n < 1");
    Rng rng(seed, 0);
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (long i = 0; i < n; ++i) {
        const double b = rng.normal();
        const double u = rng.uniform();
        // invert P(S1 > x | B1 = b) = exp(-2x(x-b))
        double s = 0.5 * (b + std::sqrt(b * b - 2.0 * std::log(1.0 - u)));
        s = std::max(s, std::max(b, 0.0));
        out.emplace_back(s, b);
    }
    return out;
}

McEstimate estimate_phi_brownian(double x, long n, std::uint64_t seed) {
    if (!(x > 0.0)) throw std::domain_error("estimate_phi_brownian: x <= 0");
    if (n < 1) throw std::invalid_argument("estimate_phi_brownian: n < 1");
    Rng rng(seed, 0);
    Acc acc;
    for (long i = 0; i < n; ++i) {
        const double b = rng.normal();
        const double u = rng.uniform();
        double s = 0.5 * (b + std::sqrt(b * b - 2.0 * std::log(1.0 - u)));
        s = std::max(s, std::max(b, 0.0));
        acc.add(s < x && b > 0.0 ? b * (x - b) : 0.0);
    }
    return acc.estimate(seed);
}

McEstimate estimate_sup_zz(const model::ModelSpec& model, const SimConfig& cfg) {
    cfg.validate();
    model.validate();
    const long max_steps = static_cast<long>(cfg.horizon / cfg.dt);
    const double sqdt = std::sqrt(cfg.dt);
    Acc total;
    for (int i = 0; i < cfg.n_streams; ++i) {
        Rng rng(cfg.seed, i);
        Acc acc;
        const long np = paths_in_stream(cfg.n_paths, cfg.n_streams, i);
        switch (model.family) {
            case model::Family::ExpLastPassage: {
                // Z(1-Z) is monotone in X = log M on either side of Z = 1/2,
                // so the grid max needs only two extremes of X.
                const double lnK = std::log(model.K);
                const double xc = lnK - 0.6931471805599453;  // Z = 1/2
                const double stop_x = lnK + std::log(cfg.eps_stop);
                const double half = 0.5 * cfg.dt;
                for (long p = 0; p < np; ++p) {
                    double x = 0.0;
                    double xlo = -kInf, xband = kInf;
                    for (long s = 1; s <= max_steps; ++s) {
                        x += sqdt * rng.normal() - half;
                        if (x < xc) {
                            if (x > xlo) xlo = x;
                        } else if (x < lnK) {
                            if (x < xband) xband = x;
                        }
                        if (x <= stop_x) break;
                    }
                    double best = 0.0;
                    if (xlo > -kInf) {
                        const double z = std::exp(xlo - lnK);
                        best = std::max(best, z * (1.0 - z));
                    }
                    if (xband < kInf) {
                        const double z = std::exp(xband - lnK);
                        best = std::max(best, z * (1.0 - z));
                    }
                    acc.add(best);
                }
                break;
            }
            case model::Family::BrownianBeforeHit: {
                const double a = model.a, ahalf = 0.5 * model.a;
                for (long p = 0; p < np; ++p) {
                    double b = 0.0;
                    double blo = -kInf, bband = kInf;
                    for (long s = 1; s <= max_steps; ++s) {
                        const double prev = b;
                        b += sqdt * rng.normal();
                        if (b < ahalf) {
                            if (b > blo) blo = b;
                        } else if (b < a) {
                            if (b < bband) bband = b;
                        }
                        if (b >= a) break;
                        const double q = (a - prev) * (a - b);
                        if (q < 10.0 * cfg.dt &&
                            rng.uniform() < std::exp(-2.0 * q / cfg.dt))
                            break;
                    }
                    double best = 0.0;
                    for (double bb : {blo, bband}) {
                        if (bb > -kInf && bb < kInf) {
                            const double z = 1.0 - std::max(bb, 0.0) / a;
                            best = std::max(best, z * (1.0 - z));
                        }
                    }
                    acc.add(best);
                }
                break;
            }
            case model::Family::BesselLastPassage: {
                const int d = bessel_dimension(model.mu);
                const double a = model.a;
                const double rhalf =
                    a * std::pow(2.0, 1.0 / (2.0 * model.mu));  // Z = 1/2
                const double stop_r =
                    a * std::pow(cfg.eps_stop, -1.0 / (2.0 * model.mu));
                std::vector<double> w(d);
                for (long p = 0; p < np; ++p) {
                    std::fill(w.begin(), w.end(), 0.0);
                    double rin = -kInf, rout = kInf;
                    for (long s = 1; s <= max_steps; ++s) {
                        double r2 = 0.0;
                        for (int k = 0; k < d; ++k) {
                            w[k] += sqdt * rng.normal();
                            r2 += w[k] * w[k];
                        }
                        const double r = std::sqrt(r2);
                        if (r > a && r <= rhalf) {
                            if (r > rin) rin = r;
                        } else if (r > rhalf) {
                            if (r < rout) rout = r;
                        }
                        if (r >= stop_r) break;
                    }
                    double best = 0.0;
                    for (double rr : {rin, rout}) {
                        if (rr > 0.0 && rr < kInf) {
                            const double z = std::pow(a / rr, 2.0 * model.mu);
                            best = std::max(best, z * (1.0 - z));
                        }
                    }
                    acc.add(best);
                }
                break;
            }
        }
        total.merge(acc);
    }
    return total.estimate(cfg.seed);
}

McEstimate estimate_at_level_hit(const model::ModelSpec& model, double level,
                                 const SimConfig& cfg) {
    cfg.validate();
    model.validate();
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("estimate_at_level_hit: level outside (0,1)");
    if (level <= cfg.eps_stop)
        throw std::invalid_argument(
            "estimate_at_level_hit: level must exceed eps_stop");
    const long max_steps = static_cast<long>(cfg.horizon / cfg.dt);
    const double sqdt = std::sqrt(cfg.dt);
    Acc total;
    long censored = 0;
    for (int i = 0; i < cfg.n_streams; ++i) {
        Rng rng(cfg.seed, i);
        Acc acc;
        const long np = paths_in_stream(cfg.n_paths, cfg.n_streams, i);
        switch (model.family) {
            case model::Family::ExpLastPassage: {
                const double lnK = std::log(model.K);
                const double xhit = lnK + std::log(level);
                const double half = 0.5 * cfg.dt;
                for (long p = 0; p < np; ++p) {
                    double x = 0.0;
                    bool done = false;
                    for (long s = 1; s <= max_steps; ++s) {
                        x += sqdt * rng.normal() - half;
                        if (x <= xhit) {
                            const double z = std::exp(x - lnK);
                            acc.add(z * (1.0 - z));
                            done = true;
                            break;
                        }
                    }
                    if (!done) ++censored;
                }
                break;
            }
            case model::Family::BrownianBeforeHit: {
                const double bhit = model.a * (1.0 - level);
                for (long p = 0; p < np; ++p) {
                    double b = 0.0;
                    bool done = false;
                    for (long s = 1; s <= max_steps; ++s) {
                        b += sqdt * rng.normal();
                        if (b >= bhit) {
                            const double z =
                                std::max(1.0 - std::max(b, 0.0) / model.a, 0.0);
                            acc.add(z * (1.0 - z));
                            done = true;
                            break;
                        }
                    }
                    if (!done) ++censored;
                }
                break;
            }
            case model::Family::BesselLastPassage: {
                const int d = bessel_dimension(model.mu);
                const double rhit =
                    model.a * std::pow(level, -1.0 / (2.0 * model.mu));
                std::vector<double> w(d);
                for (long p = 0; p < np; ++p) {
                    std::fill(w.begin(), w.end(), 0.0);
                    bool done = false;
                    for (long s = 1; s <= max_steps; ++s) {
                        double r2 = 0.0;
                        for (int k = 0; k < d; ++k) {
                            w[k] += sqdt * rng.normal();
                            r2 += w[k] * w[k];
                        }
                        if (std::sqrt(r2) >= rhit) {
                            const double z =
                                std::pow(model.a / std::sqrt(r2),
                                         2.0 * model.mu);
                            acc.add(z * (1.0 - z));
                            done = true;
                            break;
                        }
                    }
                    if (!done) ++censored;
                }
                break;
            }
        }
        total.merge(acc);
    }
    if (censored > 0)
        throw std::runtime_error("estimate_at_level_hit: " +
                                 std::to_string(censored) +
                                 " paths never reached the level before the "
                                 "horizon; raise SimConfig::horizon");
    return total.estimate(cfg.seed);
}

}  // namespace nst::mc
