#pragma once

#include <functional>

// Scalar special functions, quadrature and 1-D solvers used by the
// closed-form model evaluations.  Everything here is pure and reentrant.

namespace nst::num {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // >= 0
    long evaluations = 0;         // >= 3
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

struct MaxResult {
    double argmax = 0.0;
    double max_value = 0.0;
    double abscissa_tolerance = 0.0;
    bool on_edge = false;  // maximum pinned to a bracket end
};

// Standard normal CDF.
double normal_cdf(double x);

// Scaled complementary error function exp(x^2) * erfc(x), x >= 0.
double erfcx(double x);

// Phi(d) * exp(c) for d <= 0, evaluated as erfcx so the product stays
// finite even when exp(c) alone would overflow.
double phi_times_exp(double d, double c);

// log Gamma(x), x > 0.
double log_gamma(double x);

// Generalized exponential integral E_nu(z) = int_1^inf t^-nu e^-zt dt,
// nu >= 0, z > 0.
double exp_integral(double nu, double z);

// e^z * E_nu(z); usable far past the underflow point of E_nu itself.
double exp_integral_scaled(double nu, double z);

// Adaptive Simpson quadrature. |result - true| <= max(tol, tol*|result|)
// for smooth integrands. Throws on non-convergence at max_depth.
QuadResult adaptive_quad(const std::function<double(double)>& f, double lo,
                         double hi, double tol = 1e-11, int max_depth = 60);

// Brent root search on a sign-changing bracket.
RootResult brent_root(const std::function<double(double)>& g, double lo,
                      double hi, double tol = 1e-12, int max_iter = 200);

// Brent 1-D maximization; caller guarantees unimodality on the bracket.
MaxResult maximize_1d(const std::function<double(double)>& f, double lo,
                      double hi, double tol = 1e-8);

}  // namespace nst::num
