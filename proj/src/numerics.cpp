#include "nst/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nst::num {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace

double normal_cdf(double x) {
    if (!std::isfinite(x)) throw std::domain_error("normal_cdf: non-finite x");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double erfcx(double x) {
    if (x < 0.0) throw std::domain_error("erfcx: negative argument");
    if (x < 4.0) {
        // erfc does not underflow here and exp(x^2) stays small.
        return std::exp(x * x) * std::erfc(x);
    }
    // Laplace continued fraction, Lentz form:
    // sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    const double tiny = 1e-300;
    double b = x;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = 0.5 * i;
        d = b + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h / 1.7724538509055160273;  // / sqrt(pi)
}

double phi_times_exp(double d, double c) {
    if (d > 0.0) throw std::domain_error("phi_times_exp: d must be <= 0");
    if (!std::isfinite(d) || !std::isfinite(c))
        throw std::domain_error("phi_times_exp: non-finite argument");
    // Phi(d) = 0.5 erfcx(-d/sqrt2) exp(-d^2/2)
    return 0.5 * erfcx(-d / kSqrt2) * std::exp(c - 0.5 * d * d);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
    return std::lgamma(x);
}

namespace {

// Continued fraction for e^z E_nu(z), reliable for z >= 1.
double expint_cf_scaled(double nu, double z) {
    const double tiny = 1e-300;
    double b = z + nu;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        const double a = -i * (nu - 1.0 + i);
        b += 2.0;
        d = a * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) return h;
    }
    throw std::runtime_error("exp_integral: continued fraction failed");
}

// Classical log series for integer order n >= 1, z < 1.
double expint_int_series(int n, double z) {
    double psi = -kEulerGamma;
    for (int k = 1; k < n; ++k) psi += 1.0 / k;
    // factor (-z)^{n-1}/(n-1)!
    double fac = 1.0;
    for (int k = 1; k < n; ++k) fac *= -z / k;
    double sum = fac * (psi - std::log(z));
    double term = 1.0;  // (-z)^m / m!
    for (int m = 0; m <= 400; ++m) {
        if (m > 0) term *= -z / m;
        if (m != n - 1) {
            const double add = -term / (m - n + 1);
            sum += add;
            if (m > n && std::fabs(add) < 1e-17 * std::fabs(sum)) break;
        }
    }
    return sum;
}

// Direct series for non-integer nu in (0,1), z < 1:
//   E_nu(z) = Gamma(1-nu) z^{nu-1} - sum_m (-z)^m / (m! (m+1-nu))
double expint_frac_series(double nu, double z) {
    double sum = std::tgamma(1.0 - nu) * std::pow(z, nu - 1.0);
    double term = 1.0;
    for (int m = 0; m <= 400; ++m) {
        if (m > 0) term *= -z / m;
        const double add = -term / (m + 1.0 - nu);
        sum += add;
        if (m > 2 && std::fabs(add) < 1e-17 * std::fabs(sum)) break;
    }
    return sum;
}

double expint_small_z(double nu, double z) {
    if (nu == 0.0) return std::exp(-z) / z;
    const double nr = std::nearbyint(nu);
    if (std::fabs(nu - nr) < 1e-12 && nr >= 1.0)
        return expint_int_series(static_cast<int>(nr), z);
    // base order in (0,1), then the integration-by-parts recurrence upward
    const double k = std::floor(nu);
    const double nu0 = nu - k;
    double e = expint_frac_series(nu0, z);
    const double ez = std::exp(-z);
    for (double s = nu0; s < nu - 0.5; s += 1.0) e = (ez - z * e) / s;
    return e;
}

}  // namespace

double exp_integral(double nu, double z) {
    if (!(nu >= 0.0)) throw std::domain_error("exp_integral: nu must be >= 0");
    if (!(z > 0.0)) throw std::domain_error("exp_integral: z must be > 0");
    if (z >= 1.0) return expint_cf_scaled(nu, z) * std::exp(-z);
    return expint_small_z(nu, z);
}

double exp_integral_scaled(double nu, double z) {
    if (!(nu >= 0.0)) throw std::domain_error("exp_integral: nu must be >= 0");
    if (!(z > 0.0)) throw std::domain_error("exp_integral: z must be > 0");
    if (z >= 1.0) return expint_cf_scaled(nu, z);
    return expint_small_z(nu, z) * std::exp(z);
}

namespace {

struct QuadState {
    const std::function<double(double)>& f;
    long evaluations = 0;
    double error_estimate = 0.0;
    bool converged = true;

    double eval(double x) {
        ++evaluations;
        return f(x);
    }

    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = eval(lm), frm = eval(rm);
        const double h12 = (b - a) / 12.0;
        const double left = h12 * (fa + 4.0 * flm + fm);
        const double right = h12 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth <= 0) {
            converged = false;
            error_estimate += std::fabs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        if (std::fabs(delta) <= 15.0 * tol) {
            error_estimate += std::fabs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

}  // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double lo,
                         double hi, double tol, int max_depth) {
    if (!(lo < hi)) throw std::invalid_argument("adaptive_quad: lo >= hi");
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quad: tol <= 0");
    QuadState st{f};
    // A fixed initial split keeps narrowly-peaked integrands visible to the
    // adaptive stage.
    constexpr int kPanels = 8;
    const double h = (hi - lo) / kPanels;
    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        const double a = lo + p * h, b = a + h;
        const double m = 0.5 * (a + b);
        const double fa = st.eval(a), fm = st.eval(m), fb = st.eval(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += st.recurse(a, b, fa, fm, fb, whole, tol / kPanels, max_depth);
    }
    if (!st.converged)
        throw std::runtime_error("adaptive_quad: tolerance not met at max depth");
    return QuadResult{total, st.error_estimate, st.evaluations};
}

RootResult brent_root(const std::function<double(double)>& g, double lo,
                      double hi, double tol, int max_iter) {
    if (!(lo < hi)) throw std::invalid_argument("brent_root: bad bracket");
    double a = lo, b = hi;
    double fa = g(a), fb = g(b);
    if (fa == 0.0) return {a, 0.0, 0, lo, hi};
    if (fb == 0.0) return {b, 0.0, 0, lo, hi};
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("brent_root: no sign change on bracket");

    double c = a, fc = fa;
    double d = b - a, e = d;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double xm = 0.5 * (c - b);
        const double tol1 =
            2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
            0.5 * tol;
        if (std::fabs(xm) <= tol1 || fb == 0.0 || std::fabs(fb) <= tol) break;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q),
                                   std::fabs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::fabs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = g(b);
    }
    return RootResult{b, fb, iter, std::min(b, c), std::max(b, c)};
}

MaxResult maximize_1d(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("maximize_1d: bad bracket");
    if (!(tol > 0.0)) throw std::invalid_argument("maximize_1d: tol <= 0");
    // Brent's localmin on -f.
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = -f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = tol * (std::fabs(x) + 1e-12);
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool golden = true;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double etemp = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? a - x : b - x;
            d = gold * e;
        }
        const double u = (std::fabs(d) >= tol1) ? x + d : x + std::copysign(tol1, d);
        const double fu = -f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw; w = x; fw = fx; x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw; w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    MaxResult res;
    res.argmax = x;
    res.max_value = -fx;
    res.abscissa_tolerance = tol;
    res.on_edge = (x - lo) <= 2.0 * tol * (std::fabs(lo) + 1e-12) ||
                  (hi - x) <= 2.0 * tol * (std::fabs(hi) + 1e-12);
    return res;
}

}  // namespace nst::num
