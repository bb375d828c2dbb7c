#include "freemoments/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fm {

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;

// Relative width of the band around a case boundary that sets the boundary
// flag; matches the perturbation scale the classification tests exercise.
constexpr double boundary_band = 1e-6;

double horner_y0_third(double y3, double omega, double lambda, double u) {
  // Y_0(u) = y3 u^3 + 3 (Omega/y3) u + Lambda/y3^2
  return ((y3 * u) * u + 3.0 * omega / y3) * u + lambda / (y3 * y3);
}

double horner_y0_fourth(double y4, double omega, double lambda, double theta, double u) {
  // Y_0(u) = y4 u^4 + 6 (Omega/y4) u^2 + 4 (Lambda/y4^2) u + Theta/y4^3
  return (((y4 * u) * u + 6.0 * omega / y4) * u + 4.0 * lambda / (y4 * y4)) * u +
         theta / (y4 * y4 * y4);
}

void sort_ascending(std::vector<CriticalPoint>& pts) {
  std::sort(pts.begin(), pts.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.u < b.u; });
}

}  // namespace

const char* to_string(GeometryCase c) {
  switch (c) {
    case GeometryCase::MONOTONE_INFLECTION: return "MONOTONE_INFLECTION";
    case GeometryCase::MAX_INFLECTION_MIN: return "MAX_INFLECTION_MIN";
    case GeometryCase::SINGLE_MIN: return "SINGLE_MIN";
    case GeometryCase::SINGLE_MIN_WITH_INFLECTIONS: return "SINGLE_MIN_WITH_INFLECTIONS";
    case GeometryCase::MIN_MAX_MIN: return "MIN_MAX_MIN";
    case GeometryCase::QUADRATIC_EXTREMUM: return "QUADRATIC_EXTREMUM";
    case GeometryCase::NO_CRITICAL_POINTS: return "NO_CRITICAL_POINTS";
  }
  return "UNKNOWN";
}

const char* to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::maximum: return "maximum";
    case CriticalKind::inflection: return "inflection";
  }
  return "unknown";
}

std::vector<double> cubic_real_roots(double c3, double c1, double c0) {
  if (!std::isfinite(c3) || !std::isfinite(c1) || !std::isfinite(c0))
    throw invalid_input("cubic coefficients must be finite");
  if (c3 == 0.0) {
    if (c1 == 0.0) return {};  // constant polynomial: no isolated roots
    return {-c0 / c1};
  }

  const double p = c1 / c3;
  const double q = c0 / c3;
  const double disc = -4.0 * p * p * p - 27.0 * q * q;
  const double disc_scale = std::max(4.0 * std::fabs(p * p * p), 27.0 * q * q);

  std::vector<double> roots;
  if (disc_scale == 0.0) {
    roots.push_back(0.0);  // u^3 = 0: triple root
  } else if (std::fabs(disc) <= 1e-12 * disc_scale) {
    // Multiple-root boundary; disc ~ 0 with disc_scale > 0 forces p < 0.
    roots.push_back(-3.0 * q / (2.0 * p));  // double root
    roots.push_back(3.0 * q / p);           // simple root
  } else if (disc > 0.0) {
    // Three distinct real roots (p < 0 here): trigonometric form.
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg);
    for (int k = 0; k < 3; ++k)
      roots.push_back(m * std::cos(phi / 3.0 - 2.0 * pi * k / 3.0));
  } else {
    // One real root: Cardano arranged so no cancellation occurs.
    if (q == 0.0) {
      roots.push_back(0.0);  // disc < 0 with q = 0 means p > 0
    } else {
      const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
      const double a = -std::copysign(std::cbrt(std::fabs(q) / 2.0 + s), q);
      roots.push_back(a - p / (3.0 * a));
    }
  }

  // Newton polish against the original coefficients, kept only when it
  // reduces the residual (a double root would otherwise make it oscillate).
  auto f = [&](double u) { return (c3 * u * u + c1) * u + c0; };
  auto fp = [&](double u) { return 3.0 * c3 * u * u + c1; };
  for (double& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const double d = fp(r);
      if (d == 0.0) break;
      const double cand = r - f(r) / d;
      if (std::fabs(f(cand)) < std::fabs(f(r)))
        r = cand;
      else
        break;
    }
  }

  std::sort(roots.begin(), roots.end());
  return roots;
}

GeometryReport classify_third(const MomentVector& y) {
  if (y.order != 3) throw invalid_input("third-order classification needs order 3");
  const double y3 = y.values[3];
  if (y3 == 0.0)
    throw degenerate_top_moment("y_3 is zero; use the quadratic special case");

  if (y3 < 0.0) {
    // Classify the time- and sign-reversed problem, then mirror u -> -u.
    // Omega and Lambda are unchanged by the reversal, so values carry over.
    MomentVector reflected(3, {y.values[0], -y.values[1], y.values[2], -y.values[3]},
                           y.mass, y.hbar);
    GeometryReport r = classify_third(reflected);
    for (auto& cp : r.critical_points) cp.u = -cp.u;
    sort_ascending(r.critical_points);
    r.invariants_used = invariants(y);
    return r;
  }

  const InvariantSet zs = invariants(y);
  const double omega = zs.z[2];
  const double lambda = zs.z[3];
  const std::vector<double> scale = invariant_scale(y);

  GeometryReport report;
  report.order = 3;
  report.invariants_used = zs;
  report.boundary = std::fabs(omega) <= boundary_band * scale[2];

  if (omega >= 0.0) {
    report.case_label = GeometryCase::MONOTONE_INFLECTION;
    report.critical_points.push_back(
        {0.0, CriticalKind::inflection, horner_y0_third(y3, omega, lambda, 0.0)});
  } else {
    report.case_label = GeometryCase::MAX_INFLECTION_MIN;
    const double u0 = std::sqrt(-omega) / y3;
    report.u0 = u0;
    report.critical_points.push_back(
        {-u0, CriticalKind::maximum, horner_y0_third(y3, omega, lambda, -u0)});
    report.critical_points.push_back(
        {0.0, CriticalKind::inflection, horner_y0_third(y3, omega, lambda, 0.0)});
    report.critical_points.push_back(
        {u0, CriticalKind::minimum, horner_y0_third(y3, omega, lambda, u0)});
  }
  return report;
}

GeometryReport classify_fourth(const MomentVector& y, bool raw) {
  if (y.order != 4) throw invalid_input("fourth-order classification needs order 4");
  const double y4 = y.values[4];
  if (y4 == 0.0)
    throw degenerate_top_moment("y_4 is zero; the profile is not quartic");
  if (!raw) {
    if (y4 < 0.0)
      throw invalid_input("y_4 must be positive for physical data (raw mode accepts it)");
    if (y.values[0] < 0.0)
      throw invalid_input("y_0 must be non-negative for physical data (raw mode accepts it)");
  }

  if (y4 < 0.0) {
    // Classify -Y. The case label then names the shape of -Y_0; critical
    // points are mapped back so kinds and values describe Y_0 itself.
    std::vector<double> neg(y.values.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -y.values[i];
    GeometryReport r = classify_fourth(MomentVector(4, std::move(neg), y.mass, y.hbar), true);
    for (auto& cp : r.critical_points) {
      cp.value = -cp.value;
      if (cp.kind == CriticalKind::minimum)
        cp.kind = CriticalKind::maximum;
      else if (cp.kind == CriticalKind::maximum)
        cp.kind = CriticalKind::minimum;
    }
    r.invariants_used = invariants(y);
    return r;
  }

  const InvariantSet zs = invariants(y);
  const double omega = zs.z[2];
  const double lambda = zs.z[3];
  const double theta = zs.z[4];
  const std::vector<double> scale = invariant_scale(y);

  GeometryReport report;
  report.order = 4;
  report.invariants_used = zs;

  const double fold = 2.0 * std::pow(std::fabs(omega), 1.5);  // |Lambda| at the cusp
  if (omega > 0.0) {
    report.case_label = GeometryCase::SINGLE_MIN;
  } else if (omega == 0.0 && lambda == 0.0) {
    report.case_label = GeometryCase::SINGLE_MIN;  // pure quartic plus shift
  } else if (std::fabs(lambda) >= fold) {
    report.case_label = GeometryCase::SINGLE_MIN_WITH_INFLECTIONS;
  } else {
    report.case_label = GeometryCase::MIN_MAX_MIN;
  }
  report.boundary =
      std::fabs(omega) <= boundary_band * scale[2] ||
      (omega <= 0.0 &&
       std::fabs(std::fabs(lambda) - fold) <= boundary_band * std::max(scale[3], fold));

  // Extrema are the real roots of Y_1(u) = y4 u^3 + 3 (Omega/y4) u + Lambda/y4^2.
  const std::vector<double> roots =
      cubic_real_roots(y4, 3.0 * omega / y4, lambda / (y4 * y4));
  auto value_at = [&](double u) { return horner_y0_fourth(y4, omega, lambda, theta, u); };

  if (roots.size() == 3) {
    // Simple roots of an upward cubic alternate crossings: min, max, min.
    report.critical_points.push_back({roots[0], CriticalKind::minimum, value_at(roots[0])});
    report.critical_points.push_back({roots[1], CriticalKind::maximum, value_at(roots[1])});
    report.critical_points.push_back({roots[2], CriticalKind::minimum, value_at(roots[2])});
  } else if (roots.size() == 2) {
    // One double root (Y_1 touches zero: a horizontal inflection of Y_0) and
    // one simple root (a minimum); the double root has the smaller |Y_1'|.
    auto slope = [&](double u) { return 3.0 * y4 * u * u + 3.0 * omega / y4; };
    const bool first_is_double = std::fabs(slope(roots[0])) < std::fabs(slope(roots[1]));
    const double rd = first_is_double ? roots[0] : roots[1];
    const double rs = first_is_double ? roots[1] : roots[0];
    report.critical_points.push_back({rd, CriticalKind::inflection, value_at(rd)});
    report.critical_points.push_back({rs, CriticalKind::minimum, value_at(rs)});
  } else if (roots.size() == 1) {
    report.critical_points.push_back({roots[0], CriticalKind::minimum, value_at(roots[0])});
  }

  // Curvature inflections sit where Y_2(u) = y4 u^2 + Omega/y4 vanishes,
  // i.e. at +-u0 whenever Omega < 0, with value (Theta - 5 Omega^2 +- 4
  // sqrt(|Omega|) Lambda)/y4^3; skip ones that coincide with a horizontal
  // inflection already found as a double root of Y_1.
  if (omega < 0.0) {
    const double u0 = std::sqrt(-omega) / y4;
    report.u0 = u0;
    for (double ui : {-u0, u0}) {
      bool duplicate = false;
      for (const auto& cp : report.critical_points)
        if (cp.kind == CriticalKind::inflection &&
            std::fabs(cp.u - ui) <= 1e-5 * std::max(1.0, u0)) {
          duplicate = true;
          break;
        }
      if (!duplicate)
        report.critical_points.push_back({ui, CriticalKind::inflection, value_at(ui)});
    }
    sort_ascending(report.critical_points);
  } else if (omega == 0.0) {
    report.u0 = 0.0;  // the inflection pair has collapsed and disappeared
  }

  return report;
}

GeometryReport real_initial_fourth(double y0, double y2, double y4) {
  if (!std::isfinite(y0) || !std::isfinite(y2) || !std::isfinite(y4))
    throw invalid_input("moments must be finite");
  if (y4 == 0.0) throw degenerate_top_moment("y_4 is zero; the profile is not quartic");
  if (y4 < 0.0) throw invalid_input("y_4 must be positive");
  if (y0 < 0.0) throw invalid_input("y_0 must be non-negative");

  GeometryReport report;
  report.order = 4;
  report.invariants_used = invariants(MomentVector(4, {y0, 0.0, y2, 0.0, y4}));
  report.boundary = y2 == 0.0;

  if (y2 >= 0.0) {
    report.case_label = GeometryCase::SINGLE_MIN;
    report.critical_points.push_back({0.0, CriticalKind::minimum, y0});
    return report;
  }

  report.case_label = GeometryCase::MIN_MAX_MIN;
  const double u0 = std::sqrt(-y2 / y4);
  report.u0 = u0;
  const double um = std::sqrt(3.0) * u0;
  const double v_inflection = y0 - 5.0 * y2 * y2 / y4;
  const double v_minimum = y0 - 9.0 * y2 * y2 / y4;
  report.critical_points.push_back({-um, CriticalKind::minimum, v_minimum});
  report.critical_points.push_back({-u0, CriticalKind::inflection, v_inflection});
  report.critical_points.push_back({0.0, CriticalKind::maximum, y0});
  report.critical_points.push_back({u0, CriticalKind::inflection, v_inflection});
  report.critical_points.push_back({um, CriticalKind::minimum, v_minimum});
  return report;
}

GeometryReport special_case_topzero(const MomentVector& y) {
  if (y.order != 3) throw invalid_input("the quadratic special case is third order");
  if (y.values[3] != 0.0)
    throw invalid_input("y_3 must be exactly zero for the quadratic special case");
  const double y0 = y.values[0], y1 = y.values[1], y2 = y.values[2];

  GeometryReport report;
  report.order = 3;

  if (y2 == 0.0) {
    report.case_label = GeometryCase::NO_CRITICAL_POINTS;  // Y_0 linear in t
    return report;
  }

  // Y_0(t) = y0 + 3 tau y1 + 3 tau^2 y2 with tau = t/m: a parabola with
  // vertex at tau = -y1/(2 y2). Reported u is t/m (no reference time exists).
  report.case_label = GeometryCase::QUADRATIC_EXTREMUM;
  const double u_star = -y1 / (2.0 * y2);
  const double v_star = y0 - 3.0 * y1 * y1 / (4.0 * y2);
  report.critical_points.push_back(
      {u_star, y2 > 0.0 ? CriticalKind::minimum : CriticalKind::maximum, v_star});
  return report;
}

}  // namespace fm
