#pragma once

#include <cstddef>

#include "freemoments/moments.hpp"
#include "freemoments/wavefunction.hpp"

namespace fm {

// Spread/shape summary of a density: sigma2 = <X^2>^{1/2},
// sigma4 = <X^4>^{1/4}, skew_length = <X^3>/<X^2> (a signed length),
// kurtosis = <X^4>/<X^2>^2 (>= 1 by the Schwarz inequality).
struct ShapeMetrics {
  double sigma2 = 0.0;
  double sigma4 = 0.0;
  double skew_length = 0.0;
  double kurtosis = 0.0;
};

// Grid-measured metrics (density moments about the centroid). Throws
// convergence_error when fourth moments still carry weight at the grid edge.
ShapeMetrics shape_metrics(const GridWavefunction& psi);

// psi(x) = exp(-x^2 / a^2): sigma2 = a/2, K = 3, and minimum-uncertainty
// moments at every order (Omega_2 = hbar^2/4 exactly).
struct Gaussian {
  double a = 1.0;
  double hbar = 1.0;
  double mass = 1.0;

  GridWavefunction grid(std::size_t points, double extent) const;
  // Closed-form symmetrized moments for n = 2, 3, 4 (factorized Gaussian
  // phase-space density): n=2 (a^2/4, 0, hbar^2/a^2), n=3 all zero,
  // n=4 (3a^4/16, 0, hbar^2/4, 0, 3hbar^4/a^4).
  MomentVector moments(int n) const;
  double p2() const;  // <P^2> = hbar^2/a^2
  double p4() const;  // <P^4> = 3 hbar^4/a^4
  ShapeMetrics metrics() const;
};

// psi(x) = (1 + i b x / a) exp(-x^2 / (2 a^2)): the minimal state with
// nonzero third moments. |psi|^2 is even and psi(-x) = conj(psi(x)), so
// y_0 = y_2 = 0 and the order-3 vector is (0, y_1, 0, y_3).
struct SkewGaussian {
  double b = 0.0;
  double a = 1.0;
  double hbar = 1.0;
  double mass = 1.0;

  GridWavefunction grid(std::size_t points, double extent) const;
  double p_mean() const;  // 2 b hbar / (a (b^2 + 2))
  double y1() const;      // -2 b^3 a hbar / (2 + b^2)^2
  double y3() const;      // 2 b^3 (2 - 3 b^2) hbar^3 / ((2 + b^2)^3 a^3)
  double omega3() const;  // 4 b^6 (3 b^2 - 2) hbar^4 / ((b^2 + 2)^5 a^2)
  double u0() const;      // sqrt(|Omega_3|)/y_3 (when Omega_3 < 0)
  MomentVector moments3() const;
};

// psi(x) = |x|^c exp(-|x/a|^b), density |x|^{2c} exp(-2 |x/a|^b): the
// heavy-shouldered family whose fourth moments can break classical
// positivity. Every quantity has its own existence domain, enforced where
// it is requested (Gamma-argument positivity), so position metrics remain
// available where momentum moments diverge.
struct PowerExponential {
  double c = 0.0;
  double b = 1.0;
  double a = 1.0;
  double hbar = 1.0;
  double mass = 1.0;

  // Closed forms via log-Gamma ratios:
  double x_even_moment(int s) const;  // <X^s> = a^s 2^{-s/b} G((2c+s+1)/b)/G((2c+1)/b), even s
  double x2() const { return x_even_moment(2); }
  double x4() const { return x_even_moment(4); }
  double p2() const;  // hbar^2 a^-2 2^{-2+2/b} [b(2c-1)+1] G((2c-1)/b)/G((2c+1)/b), c > 1/2
  double p4() const;  // hbar^4 a^-4 2^{-4+4/b} f_{b,c} G((2c-3)/b)/G((2c+1)/b), c > 3/2
  double y2() const;  // hbar^2 [b(2c+1) - 1] / 4
  MomentVector moments4() const;  // (x4, 0, y2, 0, p4)
  double omega4() const;          // y2 * p4 (odd components vanish)
  double u0() const;              // sqrt(|Omega_4|)/y_4
  ShapeMetrics metrics() const;

  // Independent adaptive quadrature of the same quantities (substitution
  // y = (x/a)^b; endpoint-singularity-tolerant rules). Used to certify the
  // closed forms; never reads them.
  double x_even_moment_quadrature(int s) const;
  double p2_quadrature() const;
  double p4_quadrature() const;
  double y2_quadrature() const;

  // Grid realization, for visualization and CSV export only: the dynamic
  // range of this family makes grid moment measurement hopeless.
  GridWavefunction grid(std::size_t points, double extent) const;
};

// abs_exp = PowerExponential{c=0, b=1}, sqrt_exp = {c=0, b=1/2}: the heavy
// densities of the metrics table.
PowerExponential abs_exp(double a = 1.0, double hbar = 1.0, double mass = 1.0);
PowerExponential sqrt_exp(double a = 1.0, double hbar = 1.0, double mass = 1.0);

// The power-exponential with its tail replaced, beyond |x| = match_at*sigma2,
// by the unique quartic (x -+ x_zero)^2 (A + B(x -+ x_zero) + C(x -+ x_zero)^2)
// matching value and first two derivatives at the inner junction and flat
// zero at |x| = zero_at*sigma2; identically zero beyond. All fourth moments
// are finite. Moments come from piecewise adaptive quadrature.
struct TruncatedPowerExponential {
  PowerExponential base;
  double x1 = 0.0;  // inner junction radius
  double x2 = 0.0;  // outer (flat zero) radius
  double qa = 0.0, qb = 0.0, qc = 0.0;  // quartic coefficients A, B, C

  // Amplitude and derivatives at x >= 0 (even extension for x < 0).
  double value(double x) const;
  double deriv1(double x) const;
  double deriv2(double x) const;

  double x_even_moment(int s) const;  // quadrature
  double x2_moment() const { return x_even_moment(2); }
  double p2() const;
  double p4() const;
  double y2() const;
  MomentVector moments4() const;
  double omega4() const;
  ShapeMetrics metrics() const;

  GridWavefunction grid(std::size_t points, double extent) const;
};

// Builds the truncated family; junction radii are multiples of the
// untruncated sigma2. Throws singular_matching when the junction system is
// degenerate and invalid_input unless zero_at > match_at > 0.
TruncatedPowerExponential make_truncated_power_exponential(
    double c, double b, double a, double match_at, double zero_at,
    double hbar = 1.0, double mass = 1.0);

}  // namespace fm
