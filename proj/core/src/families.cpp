#include "freemoments/families.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>

#include "freemoments/errors.hpp"

namespace fm {

namespace {

void require_scales(double a, double hbar, double mass) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw invalid_input("length scale must be positive and finite");
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw invalid_input("hbar must be positive and finite");
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw invalid_input("mass must be positive and finite");
}

GridWavefunction sampled_grid(std::size_t points, double extent, double hbar, double mass,
                              const std::function<std::complex<double>(double)>& f) {
  if (points < 2) throw invalid_input("grid needs at least two points");
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw invalid_input("grid extent must be positive and finite");
  GridWavefunction psi;
  psi.x_min = -extent;
  psi.dx = 2.0 * extent / static_cast<double>(points);
  psi.hbar = hbar;
  psi.mass = mass;
  psi.amplitudes.resize(points);
  for (std::size_t i = 0; i < points; ++i) psi.amplitudes[i] = f(psi.x_at(i));
  return psi;
}

// Gamma(num)/Gamma(den) for positive arguments, via log-Gamma so that large
// arguments (small b pushes them past 100) cannot overflow intermediates.
double gamma_ratio(double num, double den) {
  if (!(num > 0.0) || !(den > 0.0))
    throw domain_error("moment does not exist: nonpositive Gamma argument");
  return std::exp(std::lgamma(num) - std::lgamma(den));
}

void ensure_gsl_quiet() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

constexpr std::size_t quad_limit = 4000;
constexpr double quad_epsrel = 1e-11;

struct ExpIntegrand {
  double alpha = 1.0;
  const std::function<double(double)>* weight = nullptr;  // null means 1
};

double exp_integrand_eval(double y, void* params) {
  const auto* ctx = static_cast<const ExpIntegrand*>(params);
  const double w = ctx->weight ? (*ctx->weight)(y) : 1.0;
  return std::pow(y, ctx->alpha - 1.0) * w * std::exp(-2.0 * y);
}

struct PlainIntegrand {
  const std::function<double(double)>* fn = nullptr;
};

double plain_integrand_eval(double x, void* params) {
  return (*static_cast<const PlainIntegrand*>(params)->fn)(x);
}

void check_quadrature(int status, double result, double abserr) {
  if (status != 0 && std::fabs(abserr) > 1e-8 * std::max(std::fabs(result), 1e-300))
    throw convergence_error("adaptive quadrature failed to converge");
}

// integral_0^upper y^{alpha-1} w(y) exp(-2y) dy, with the integrable endpoint
// singularity at 0 isolated on [0, min(1, upper)].
double exp_weighted_integral(double alpha, const std::function<double(double)>* weight,
                             double upper) {
  if (!(alpha > 0.0))
    throw domain_error("moment does not exist: integrand diverges at the origin");
  ensure_gsl_quiet();
  ExpIntegrand ctx{alpha, weight};
  gsl_function f;
  f.function = &exp_integrand_eval;
  f.params = &ctx;
  Workspace ws(gsl_integration_workspace_alloc(quad_limit));

  double total = 0.0;
  double result = 0.0, abserr = 0.0;
  const double split = std::min(1.0, upper);
  int status = gsl_integration_qags(&f, 0.0, split, 0.0, quad_epsrel, quad_limit,
                                    ws.get(), &result, &abserr);
  check_quadrature(status, result, abserr);
  total += result;
  if (upper > 1.0) {
    if (std::isinf(upper))
      status = gsl_integration_qagiu(&f, 1.0, 0.0, quad_epsrel, quad_limit, ws.get(),
                                     &result, &abserr);
    else
      status = gsl_integration_qags(&f, 1.0, upper, 0.0, quad_epsrel, quad_limit,
                                    ws.get(), &result, &abserr);
    check_quadrature(status, result, abserr);
    total += result;
  }
  return total;
}

double plain_integral(const std::function<double(double)>& fn, double lo, double hi) {
  ensure_gsl_quiet();
  PlainIntegrand ctx{&fn};
  gsl_function f;
  f.function = &plain_integrand_eval;
  f.params = &ctx;
  Workspace ws(gsl_integration_workspace_alloc(quad_limit));
  double result = 0.0, abserr = 0.0;
  const int status = gsl_integration_qags(&f, lo, hi, 0.0, quad_epsrel, quad_limit,
                                          ws.get(), &result, &abserr);
  check_quadrature(status, result, abserr);
  return result;
}

// (c - b y)^2: the y-space weight of psi' for psi = x^c exp(-(x/a)^b).
std::function<double(double)> slope_weight(double c, double b) {
  return [c, b](double y) {
    const double t = c - b * y;
    return t * t;
  };
}

// [(c - b y)^2 - b^2 y - c + b y]^2: the y-space weight of psi''.
std::function<double(double)> curvature_weight(double c, double b) {
  return [c, b](double y) {
    const double t = c - b * y;
    const double g = t * t - b * b * y - c + b * y;
    return g * g;
  };
}

}  // namespace

ShapeMetrics shape_metrics(const GridWavefunction& psi) {
  const GridWavefunction unit = psi.normalized();
  const std::size_t n = unit.size();
  if (n < 2) throw invalid_input("grid needs at least two points");

  long double xbar = 0.0L;
  for (std::size_t i = 0; i < n; ++i)
    xbar += unit.x_at(i) * std::norm(unit.amplitudes[i]);
  xbar *= unit.dx;

  const std::size_t band = std::max<std::size_t>(1, n / 16);
  long double m2 = 0.0L, m3 = 0.0L, m4 = 0.0L, w4 = 0.0L, rim = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double d = unit.x_at(i) - static_cast<double>(xbar);
    const long double rho = std::norm(unit.amplitudes[i]);
    m2 += d * d * rho;
    m3 += d * d * d * rho;
    m4 += d * d * d * d * rho;
    const long double w = d * d * d * d * rho;
    w4 += std::fabs(static_cast<double>(w));
    if (i < band || i >= n - band) rim += std::fabs(static_cast<double>(w));
  }
  if (w4 > 0.0L && static_cast<double>(rim / w4) > 1e-8)
    throw convergence_error(
        "fourth position moment still carries weight at the grid edge");
  m2 *= unit.dx;
  m3 *= unit.dx;
  m4 *= unit.dx;
  if (!(m2 > 0.0L)) throw invalid_input("degenerate density: zero spatial spread");

  ShapeMetrics s;
  s.sigma2 = std::sqrt(static_cast<double>(m2));
  s.sigma4 = std::pow(static_cast<double>(m4), 0.25);
  s.skew_length = static_cast<double>(m3 / m2);
  s.kurtosis = static_cast<double>(m4 / (m2 * m2));
  return s;
}

// ---------------------------------------------------------------- Gaussian

GridWavefunction Gaussian::grid(std::size_t points, double extent) const {
  require_scales(a, hbar, mass);
  const double width = a;
  return sampled_grid(points, extent, hbar, mass, [width](double x) {
    return std::complex<double>(std::exp(-x * x / (width * width)), 0.0);
  });
}

MomentVector Gaussian::moments(int n) const {
  require_scales(a, hbar, mass);
  switch (n) {
    case 2:
      return MomentVector(2, {a * a / 4.0, 0.0, hbar * hbar / (a * a)}, mass, hbar);
    case 3:
      return MomentVector(3, {0.0, 0.0, 0.0, 0.0}, mass, hbar);
    case 4:
      return MomentVector(4,
                          {3.0 * a * a * a * a / 16.0, 0.0, hbar * hbar / 4.0, 0.0,
                           3.0 * std::pow(hbar / a, 4.0)},
                          mass, hbar);
    default:
      throw invalid_input("closed-form Gaussian moments cover orders 2, 3, 4");
  }
}

double Gaussian::p2() const {
  require_scales(a, hbar, mass);
  return hbar * hbar / (a * a);
}

double Gaussian::p4() const {
  require_scales(a, hbar, mass);
  return 3.0 * std::pow(hbar / a, 4.0);
}

ShapeMetrics Gaussian::metrics() const {
  require_scales(a, hbar, mass);
  ShapeMetrics s;
  s.sigma2 = a / 2.0;
  s.sigma4 = a * std::pow(3.0 / 16.0, 0.25);
  s.skew_length = 0.0;
  s.kurtosis = 3.0;
  return s;
}

// ----------------------------------------------------------- SkewGaussian

GridWavefunction SkewGaussian::grid(std::size_t points, double extent) const {
  require_scales(a, hbar, mass);
  if (!std::isfinite(b)) throw invalid_input("skew parameter must be finite");
  const double width = a, skew = b;
  return sampled_grid(points, extent, hbar, mass, [width, skew](double x) {
    const double xi = x / width;
    return std::complex<double>(1.0, skew * xi) * std::exp(-xi * xi / 2.0);
  });
}

double SkewGaussian::p_mean() const {
  require_scales(a, hbar, mass);
  return 2.0 * b * hbar / (a * (b * b + 2.0));
}

double SkewGaussian::y1() const {
  require_scales(a, hbar, mass);
  const double s = b * b + 2.0;
  return -2.0 * b * b * b * a * hbar / (s * s);
}

double SkewGaussian::y3() const {
  require_scales(a, hbar, mass);
  const double s = b * b + 2.0;
  return 2.0 * b * b * b * (2.0 - 3.0 * b * b) * std::pow(hbar, 3.0) /
         (s * s * s * a * a * a);
}

double SkewGaussian::omega3() const {
  require_scales(a, hbar, mass);
  const double s = b * b + 2.0;
  return 4.0 * std::pow(b, 6.0) * (3.0 * b * b - 2.0) * std::pow(hbar, 4.0) /
         (std::pow(s, 5.0) * a * a);
}

double SkewGaussian::u0() const {
  const double om = omega3();
  const double top = y3();
  if (top == 0.0)
    throw degenerate_top_moment("y_3 vanishes; the third-order profile is degenerate");
  if (om >= 0.0)
    throw domain_error("Omega_3 >= 0: the profile is monotone and has no extrema");
  return std::sqrt(-om) / top;
}

MomentVector SkewGaussian::moments3() const {
  return MomentVector(3, {0.0, y1(), 0.0, y3()}, mass, hbar);
}

// ------------------------------------------------------- PowerExponential

namespace {

void require_power_family(const PowerExponential& f) {
  require_scales(f.a, f.hbar, f.mass);
  if (!std::isfinite(f.c)) throw invalid_input("power c must be finite");
  if (!(f.b > 0.0) || !std::isfinite(f.b))
    throw invalid_input("stretch exponent b must be positive and finite");
}

}  // namespace

double PowerExponential::x_even_moment(int s) const {
  require_power_family(*this);
  if (s < 0 || s % 2 != 0) throw invalid_input("position moments are defined for even s");
  return std::pow(a, s) * std::exp2(-static_cast<double>(s) / b) *
         gamma_ratio((2.0 * c + s + 1.0) / b, (2.0 * c + 1.0) / b);
}

double PowerExponential::p2() const {
  require_power_family(*this);
  if (!(c > 0.5))
    throw domain_error("<P^2> closed form requires c > 1/2 (psi' not square-integrable)");
  return hbar * hbar / (a * a) * std::exp2(-2.0 + 2.0 / b) * (b * (2.0 * c - 1.0) + 1.0) *
         gamma_ratio((2.0 * c - 1.0) / b, (2.0 * c + 1.0) / b);
}

double PowerExponential::p4() const {
  require_power_family(*this);
  if (!(c > 1.5))
    throw domain_error("<P^4> closed form requires c > 3/2 (psi'' not square-integrable)");
  const double d = c - 1.5;
  const double f = 9.0 + 2.0 * b * d * (10.0 + 2.0 * b * b + 6.0 * b * d);
  return std::pow(hbar / a, 4.0) * std::exp2(-4.0 + 4.0 / b) * f *
         gamma_ratio((2.0 * c - 3.0) / b, (2.0 * c + 1.0) / b);
}

double PowerExponential::y2() const {
  require_power_family(*this);
  return hbar * hbar * (b * (2.0 * c + 1.0) - 1.0) / 4.0;
}

MomentVector PowerExponential::moments4() const {
  return MomentVector(4, {x4(), 0.0, y2(), 0.0, p4()}, mass, hbar);
}

double PowerExponential::omega4() const { return y2() * p4(); }

double PowerExponential::u0() const {
  const double om = omega4();
  return std::sqrt(std::fabs(om)) / p4();
}

ShapeMetrics PowerExponential::metrics() const {
  const double m2 = x2();
  const double m4 = x4();
  ShapeMetrics s;
  s.sigma2 = std::sqrt(m2);
  s.sigma4 = std::pow(m4, 0.25);
  s.skew_length = 0.0;
  s.kurtosis = m4 / (m2 * m2);
  return s;
}

double PowerExponential::x_even_moment_quadrature(int s) const {
  require_power_family(*this);
  if (s < 0 || s % 2 != 0) throw invalid_input("position moments are defined for even s");
  const double inf = std::numeric_limits<double>::infinity();
  const double num = exp_weighted_integral((2.0 * c + s + 1.0) / b, nullptr, inf);
  const double den = exp_weighted_integral((2.0 * c + 1.0) / b, nullptr, inf);
  return std::pow(a, s) * num / den;
}

double PowerExponential::p2_quadrature() const {
  require_power_family(*this);
  const double inf = std::numeric_limits<double>::infinity();
  const auto w = slope_weight(c, b);
  const double num = exp_weighted_integral((2.0 * c - 1.0) / b, &w, inf);
  const double den = exp_weighted_integral((2.0 * c + 1.0) / b, nullptr, inf);
  return hbar * hbar / (a * a) * num / den;
}

double PowerExponential::p4_quadrature() const {
  require_power_family(*this);
  const double inf = std::numeric_limits<double>::infinity();
  const auto w = curvature_weight(c, b);
  const double num = exp_weighted_integral((2.0 * c - 3.0) / b, &w, inf);
  const double den = exp_weighted_integral((2.0 * c + 1.0) / b, nullptr, inf);
  return std::pow(hbar / a, 4.0) * num / den;
}

double PowerExponential::y2_quadrature() const {
  require_power_family(*this);
  const double inf = std::numeric_limits<double>::infinity();
  const auto w = slope_weight(c, b);
  const double num = exp_weighted_integral((2.0 * c + 1.0) / b, &w, inf);
  const double den = exp_weighted_integral((2.0 * c + 1.0) / b, nullptr, inf);
  return hbar * hbar * (num / den - 0.5);
}

GridWavefunction PowerExponential::grid(std::size_t points, double extent) const {
  require_power_family(*this);
  const double cc = c, bb = b, aa = a;
  return sampled_grid(points, extent, hbar, mass, [cc, bb, aa](double x) {
    const double ax = std::fabs(x);
    const double amp = std::pow(ax, cc) * std::exp(-std::pow(ax / aa, bb));
    return std::complex<double>(amp, 0.0);
  });
}

PowerExponential abs_exp(double a, double hbar, double mass) {
  PowerExponential f;
  f.c = 0.0;
  f.b = 1.0;
  f.a = a;
  f.hbar = hbar;
  f.mass = mass;
  return f;
}

PowerExponential sqrt_exp(double a, double hbar, double mass) {
  PowerExponential f;
  f.c = 0.0;
  f.b = 0.5;
  f.a = a;
  f.hbar = hbar;
  f.mass = mass;
  return f;
}

// ---------------------------------------------- TruncatedPowerExponential

namespace {

// Bare amplitude and derivatives of x^c exp(-(x/a)^b) at x > 0.
double bare_value(const PowerExponential& f, double x) {
  return std::pow(x, f.c) * std::exp(-std::pow(x / f.a, f.b));
}

double bare_deriv1(const PowerExponential& f, double x) {
  const double y = std::pow(x / f.a, f.b);
  return bare_value(f, x) * (f.c - f.b * y) / x;
}

double bare_deriv2(const PowerExponential& f, double x) {
  const double y = std::pow(x / f.a, f.b);
  const double t = f.c - f.b * y;
  return bare_value(f, x) * (t * t - f.b * f.b * y - f.c + f.b * y) / (x * x);
}

}  // namespace

TruncatedPowerExponential make_truncated_power_exponential(double c, double b, double a,
                                                           double match_at, double zero_at,
                                                           double hbar, double mass) {
  PowerExponential base;
  base.c = c;
  base.b = b;
  base.a = a;
  base.hbar = hbar;
  base.mass = mass;
  require_power_family(base);
  if (!(match_at > 0.0) || !(zero_at > match_at))
    throw invalid_input("junction radii must satisfy zero_at > match_at > 0");

  const double sigma2 = std::sqrt(base.x2());
  TruncatedPowerExponential t;
  t.base = base;
  t.x1 = match_at * sigma2;
  t.x2 = zero_at * sigma2;

  // Match value and two derivatives at x1 with q(d) = A d^2 + B d^3 + C d^4,
  // d = x - x2. Scaling the unknowns to (A, B d, C d^2) and the rows by
  // (1/d^2, 1/d) turns the junction system into a fixed well-conditioned one:
  //   [1 1 1; 2 3 4; 2 6 12] (A, Bd, Cd^2)^T = (v/d^2, w/d, z)^T,
  // whose determinant is 2.
  const double d = t.x1 - t.x2;
  const double r0 = bare_value(base, t.x1) / (d * d);
  const double r1 = bare_deriv1(base, t.x1) / d;
  const double r2 = bare_deriv2(base, t.x1);
  if (!std::isfinite(r0) || !std::isfinite(r1) || !std::isfinite(r2))
    throw singular_matching("junction values are not finite");

  // Cramer's rule on the fixed matrix (det = 2).
  const double s0 = (12.0 * r0 - 6.0 * r1 + r2) / 2.0;
  const double s1 = (-16.0 * r0 + 10.0 * r1 - 2.0 * r2) / 2.0;
  const double s2 = (6.0 * r0 - 4.0 * r1 + r2) / 2.0;
  t.qa = s0;
  t.qb = s1 / d;
  t.qc = s2 / (d * d);
  if (!std::isfinite(t.qa) || !std::isfinite(t.qb) || !std::isfinite(t.qc))
    throw singular_matching("junction system produced non-finite coefficients");
  return t;
}

double TruncatedPowerExponential::value(double x) const {
  const double ax = std::fabs(x);
  if (ax >= x2) return 0.0;
  if (ax > x1) {
    const double d = ax - x2;
    return (qa + qb * d + qc * d * d) * d * d;
  }
  if (ax == 0.0) return base.c == 0.0 ? 1.0 : 0.0;
  return bare_value(base, ax);
}

double TruncatedPowerExponential::deriv1(double x) const {
  const double ax = std::fabs(x);
  if (ax >= x2) return 0.0;
  if (ax > x1) {
    const double d = ax - x2;
    return (2.0 * qa + 3.0 * qb * d + 4.0 * qc * d * d) * d;
  }
  if (ax == 0.0) return 0.0;
  return bare_deriv1(base, ax);
}

double TruncatedPowerExponential::deriv2(double x) const {
  const double ax = std::fabs(x);
  if (ax >= x2) return 0.0;
  if (ax > x1) {
    const double d = ax - x2;
    return 2.0 * qa + 6.0 * qb * d + 12.0 * qc * d * d;
  }
  if (ax == 0.0) return 0.0;
  return bare_deriv2(base, ax);
}

namespace {

// Half-line integral of x^sigma * [base density factor] over the inner
// segment plus an arbitrary integrand over the quartic segment.
double inner_segment(const TruncatedPowerExponential& t, double sigma,
                     const std::function<double(double)>* weight) {
  const double y_cap = std::pow(t.x1 / t.base.a, t.base.b);
  return std::pow(t.base.a, sigma + 1.0) / t.base.b *
         exp_weighted_integral((sigma + 1.0) / t.base.b, weight, y_cap);
}

double norm_half(const TruncatedPowerExponential& t) {
  const double inner = inner_segment(t, 2.0 * t.base.c, nullptr);
  const double outer = plain_integral(
      [&t](double x) {
        const double v = t.value(x);
        return v * v;
      },
      t.x1, t.x2);
  return inner + outer;
}

}  // namespace

double TruncatedPowerExponential::x_even_moment(int s) const {
  require_power_family(base);
  if (s < 0 || s % 2 != 0) throw invalid_input("position moments are defined for even s");
  const double inner = inner_segment(*this, 2.0 * base.c + s, nullptr);
  const double outer = plain_integral(
      [this, s](double x) {
        const double v = value(x);
        return std::pow(x, s) * v * v;
      },
      x1, x2);
  return (inner + outer) / norm_half(*this);
}

double TruncatedPowerExponential::p2() const {
  require_power_family(base);
  const auto w = slope_weight(base.c, base.b);
  const double inner = inner_segment(*this, 2.0 * base.c - 2.0, &w);
  const double outer = plain_integral(
      [this](double x) {
        const double v = deriv1(x);
        return v * v;
      },
      x1, x2);
  return base.hbar * base.hbar * (inner + outer) / norm_half(*this);
}

double TruncatedPowerExponential::p4() const {
  require_power_family(base);
  const auto w = curvature_weight(base.c, base.b);
  const double inner = inner_segment(*this, 2.0 * base.c - 4.0, &w);
  const double outer = plain_integral(
      [this](double x) {
        const double v = deriv2(x);
        return v * v;
      },
      x1, x2);
  return std::pow(base.hbar, 4.0) * (inner + outer) / norm_half(*this);
}

double TruncatedPowerExponential::y2() const {
  require_power_family(base);
  const auto w = slope_weight(base.c, base.b);
  const double inner = inner_segment(*this, 2.0 * base.c, &w);
  const double outer = plain_integral(
      [this](double x) {
        const double v = deriv1(x);
        return x * x * v * v;
      },
      x1, x2);
  return base.hbar * base.hbar * ((inner + outer) / norm_half(*this) - 0.5);
}

MomentVector TruncatedPowerExponential::moments4() const {
  return MomentVector(4, {x_even_moment(4), 0.0, y2(), 0.0, p4()}, base.mass, base.hbar);
}

double TruncatedPowerExponential::omega4() const { return y2() * p4(); }

ShapeMetrics TruncatedPowerExponential::metrics() const {
  const double m2 = x_even_moment(2);
  const double m4 = x_even_moment(4);
  ShapeMetrics s;
  s.sigma2 = std::sqrt(m2);
  s.sigma4 = std::pow(m4, 0.25);
  s.skew_length = 0.0;
  s.kurtosis = m4 / (m2 * m2);
  return s;
}

GridWavefunction TruncatedPowerExponential::grid(std::size_t points, double extent) const {
  require_power_family(base);
  return sampled_grid(points, extent, base.hbar, base.mass, [this](double x) {
    return std::complex<double>(value(x), 0.0);
  });
}

}  // namespace fm
