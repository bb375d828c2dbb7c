#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freemoments/moments.hpp"

namespace fm {

enum class CriticalKind { minimum, maximum, inflection };

// One feature of the Y_0(u) profile: extrema are zeros of Y_1, inflections
// are zeros of Y_2, both certified by residual checks in the tests.
struct CriticalPoint {
  double u = 0.0;  // scaled time (t - t0)/m
  CriticalKind kind = CriticalKind::minimum;
  double value = 0.0;  // Y_0 at u
};

enum class GeometryCase {
  // order 3
  MONOTONE_INFLECTION,  // Omega_3 >= 0: no extrema, lone inflection at u = 0
  MAX_INFLECTION_MIN,   // Omega_3 <  0: maximum, inflection, minimum
  // order 4
  SINGLE_MIN,                   // Omega_4 > 0
  SINGLE_MIN_WITH_INFLECTIONS,  // Omega_4 <= 0, |Lambda_4| >= 2|Omega_4|^{3/2}
  MIN_MAX_MIN,                  // Omega_4 <= 0, |Lambda_4| <  2|Omega_4|^{3/2}
  // degenerate order 3 (y_3 = 0)
  QUADRATIC_EXTREMUM,  // y_2 != 0: parabolic Y_0, one extremum
  NO_CRITICAL_POINTS,  // y_2 = 0 too: Y_0 linear or constant
};

const char* to_string(GeometryCase c);
const char* to_string(CriticalKind k);

struct GeometryReport {
  int order = 0;
  GeometryCase case_label = GeometryCase::NO_CRITICAL_POINTS;
  std::optional<double> u0;                   // sqrt(|Omega|)/y_n where defined
  std::vector<CriticalPoint> critical_points; // ascending in u
  std::optional<InvariantSet> invariants_used;
  bool boundary = false;  // input sits on a case boundary within tolerance
};

// All real roots of c3 u^3 + c1 u + c0, ascending, polished by Newton steps;
// trigonometric branch for three real roots, stable Cardano for one, with a
// relative discriminant tolerance of 1e-12 deciding the multiple-root
// boundary. c3 == 0 falls back to the linear case (empty when c1 == 0 too).
std::vector<double> cubic_real_roots(double c3, double c1, double c0);

// Order-3 classification. y_3 < 0 is handled by classifying the time- and
// y_1-reversed problem and reflecting the result (invariants are unchanged).
// Throws degenerate_top_moment when y_3 == 0 (use special_case_topzero).
GeometryReport classify_third(const MomentVector& y);

// Order-4 classification; requires y_4 > 0 and (unless raw) y_0 >= 0.
// With raw = true, classical-data exploration is allowed: y_0 < 0 passes
// through, and y_4 < 0 classifies the negated vector with extremum kinds
// swapped (the labels then describe -Y_0).
GeometryReport classify_fourth(const MomentVector& y, bool raw = false);

// Order 4 with y_1 = y_3 = 0 (real initial wavefunction), from the closed
// forms: y_2 >= 0 gives a single minimum y_0 at u = 0; y_2 < 0 gives a
// maximum y_0 at 0, inflections of value y_0 - 5 y_2^2/y_4 at +-u0 with
// u0 = sqrt(-y_2/y_4), and minima y_0 - 9 y_2^2/y_4 at +-sqrt(3) u0.
GeometryReport real_initial_fourth(double y0, double y2, double y4);

// Order 3 with y_3 == 0 exactly: Y_2 is constant and Y_0 is quadratic with
// vertex at t = -m y_1 / (2 y_2) of value y_0 - 3 y_1^2 / (4 y_2); a minimum
// when y_2 > 0. When y_2 == 0 as well, Y_0 is linear (or constant) and the
// report is NO_CRITICAL_POINTS. Reported u is t/m (no reference time exists).
GeometryReport special_case_topzero(const MomentVector& y);

}  // namespace fm
