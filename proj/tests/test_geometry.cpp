#include <doctest.h>

#include <cmath>
#include <random>

#include "freemoments/families.hpp"
#include "freemoments/geometry.hpp"
#include "freemoments/moments.hpp"
#include "test_support.hpp"

using fm::CriticalKind;
using fm::GeometryCase;
using fm::MomentVector;
using fmtest::close;

namespace {

// Y_k evaluated at scaled time u = (t - t0)/m, via the propagator.
double component_at_u(const MomentVector& y, double u, int k) {
  const double t0 = fm::reference_time(y);
  return fm::propagate(y, u * y.mass + t0)[k];
}

// Order-4 vector with prescribed invariants, anchored at the reference time.
MomentVector from_invariants4(double y4, double omega, double lambda, double theta) {
  fm::InvariantSet z;
  z.order = 4;
  z.z = {1.0, 0.0, omega, lambda, theta};
  z.t0 = 0.0;
  z.yn = y4;
  return fm::moments_from_invariants(z, 0.0);
}

// Certify every reported critical point against the propagator: extrema are
// zeros of Y_1 and inflections zeros of Y_2, measured against the largest
// magnitude of that component over the scan window.
void certify(const fm::GeometryReport& report, const MomentVector& y) {
  double span = 1.0;
  for (const auto& cp : report.critical_points) span = std::max(span, std::fabs(cp.u));
  span *= 2.0;

  double y1_scale = 0.0, y2_scale = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double u = -span + 2.0 * span * i / 100.0;
    y1_scale = std::max(y1_scale, std::fabs(component_at_u(y, u, 1)));
    y2_scale = std::max(y2_scale, std::fabs(component_at_u(y, u, 2)));
  }

  for (const auto& cp : report.critical_points) {
    if (cp.kind == CriticalKind::inflection) {
      CHECK(std::fabs(component_at_u(y, cp.u, 2)) < 1e-8 * y2_scale);
    } else {
      CHECK(std::fabs(component_at_u(y, cp.u, 1)) < 1e-8 * y1_scale);
    }
    // The reported value is Y_0 there.
    CHECK(close(component_at_u(y, cp.u, 0), cp.value, 1e-8, 1e-10));
  }

  // Sorted ascending, and an inflection sits between consecutive extrema.
  for (std::size_t i = 1; i < report.critical_points.size(); ++i)
    CHECK(report.critical_points[i - 1].u < report.critical_points[i].u);
  for (std::size_t i = 0; i < report.critical_points.size(); ++i) {
    if (report.critical_points[i].kind == CriticalKind::inflection) continue;
    for (std::size_t j = i + 1; j < report.critical_points.size(); ++j) {
      if (report.critical_points[j].kind == CriticalKind::inflection) break;
      bool separated = false;
      for (std::size_t l = i + 1; l < j; ++l)
        separated |= report.critical_points[l].kind == CriticalKind::inflection;
      CHECK(separated);
      break;
    }
  }
}

}  // namespace

TEST_CASE("geometry: cubic solver finds certified real roots") {
  SUBCASE("three roots") {
    const auto r = fm::cubic_real_roots(1, -1, 0);
    REQUIRE(r.size() == 3);
    CHECK(close(r[0], -1.0, 1e-12));
    CHECK(close(r[1], 0.0, 1e-12, 1e-12));
    CHECK(close(r[2], 1.0, 1e-12));
  }
  SUBCASE("one root") {
    const auto r = fm::cubic_real_roots(1, 1, 0);
    REQUIRE(r.size() == 1);
    CHECK(close(r[0], 0.0, 1e-12, 1e-12));
  }
  SUBCASE("the +-sqrt(3) pattern of real initial states") {
    const auto r = fm::cubic_real_roots(1, -3, 0);
    REQUIRE(r.size() == 3);
    CHECK(close(r[0], -std::sqrt(3.0), 1e-12));
    CHECK(close(r[2], std::sqrt(3.0), 1e-12));
  }
  SUBCASE("double root (u-1)^2 (u+2)") {
    const auto r = fm::cubic_real_roots(1, -3, 2);
    REQUIRE(r.size() == 2);
    CHECK(close(r[0], -2.0, 1e-10));
    CHECK(close(r[1], 1.0, 1e-6));
  }
  SUBCASE("triple root") {
    const auto r = fm::cubic_real_roots(1, 0, 0);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == 0.0);
  }
  SUBCASE("linear fallback") {
    const auto r = fm::cubic_real_roots(0, 2, -1);
    REQUIRE(r.size() == 1);
    CHECK(close(r[0], 0.5, 1e-14));
    CHECK(fm::cubic_real_roots(0, 0, 1).empty());
  }
  SUBCASE("randomized residual certification") {
    std::mt19937_64 rng(60601);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    for (int trial = 0; trial < 2000; ++trial) {
      const double c3 = trial % 2 ? coeff(rng) : 1.0;
      if (std::fabs(c3) < 1e-3) continue;
      const double c1 = coeff(rng), c0 = coeff(rng);
      const auto roots = fm::cubic_real_roots(c3, c1, c0);
      REQUIRE(roots.size() >= 1);
      REQUIRE(roots.size() <= 3);
      for (const double u : roots) {
        const double poly = c3 * u * u * u + c1 * u + c0;
        const double scale = std::fabs(c3 * u * u * u) + std::fabs(c1 * u) + std::fabs(c0);
        CHECK(std::fabs(poly) < 1e-10 * std::max(scale, 1.0));
      }
    }
  }
}

TEST_CASE("geometry: third order, skew-Gaussian example") {
  const fm::SkewGaussian skew{0.671};
  const auto report = fm::classify_third(skew.moments3());
  CHECK(report.case_label == GeometryCase::MAX_INFLECTION_MIN);
  CHECK_FALSE(report.boundary);
  REQUIRE(report.critical_points.size() == 3);
  REQUIRE(report.u0.has_value());

  const double u0 = skew.u0();
  CHECK(std::fabs(*report.u0 - 1.94) < 0.01 * 1.94);
  CHECK(close(*report.u0, u0, 1e-12));

  const auto& mx = report.critical_points[0];
  const auto& in = report.critical_points[1];
  const auto& mn = report.critical_points[2];
  CHECK(mx.kind == CriticalKind::maximum);
  CHECK(in.kind == CriticalKind::inflection);
  CHECK(mn.kind == CriticalKind::minimum);
  CHECK(close(mx.u, -u0, 1e-12));
  CHECK(in.u == 0.0);
  CHECK(close(mn.u, u0, 1e-12));

  // Lambda_3 = 0 here, so Y0^+- = +-2|Omega_3|^{3/2}/y_3^2 ~ +-0.390.
  const double fold = 2.0 * std::pow(std::fabs(skew.omega3()), 1.5) / (skew.y3() * skew.y3());
  CHECK(close(mx.value, fold, 1e-10));
  CHECK(close(mn.value, -fold, 1e-10));
  CHECK(std::fabs(mx.value - 0.390) < 0.01);

  certify(report, skew.moments3());
}

TEST_CASE("geometry: third order, monotone case") {
  const MomentVector y(3, {0, 1, 0, 1});  // Omega_3 = y1 y3 - y2^2 = 1 > 0
  const auto report = fm::classify_third(y);
  CHECK(report.case_label == GeometryCase::MONOTONE_INFLECTION);
  REQUIRE(report.critical_points.size() == 1);
  CHECK(report.critical_points[0].kind == CriticalKind::inflection);
  CHECK(report.critical_points[0].u == 0.0);
  CHECK(close(report.critical_points[0].value, 0.0, 1e-14, 1e-14));  // Lambda_3 = 0
}

TEST_CASE("geometry: third order, Omega_3 = 0 boundary") {
  const auto report = fm::classify_third(MomentVector(3, {0, 0, 0, 1}));
  CHECK(report.case_label == GeometryCase::MONOTONE_INFLECTION);
  CHECK(report.boundary);
}

TEST_CASE("geometry: third order, y3 < 0 classifies the reflected problem") {
  const MomentVector y(3, {0.2, 0.31, -0.4, -0.8});
  const MomentVector mirrored(3, {0.2, -0.31, -0.4, 0.8});
  const auto neg = fm::classify_third(y);
  const auto pos = fm::classify_third(mirrored);
  CHECK(neg.case_label == pos.case_label);
  REQUIRE(neg.critical_points.size() == pos.critical_points.size());
  for (std::size_t i = 0; i < neg.critical_points.size(); ++i) {
    const auto& a = neg.critical_points[i];
    const auto& b = pos.critical_points[pos.critical_points.size() - 1 - i];
    CHECK(close(a.u, -b.u, 1e-12, 1e-14));
    CHECK(close(a.value, b.value, 1e-12, 1e-14));
    CHECK(a.kind == b.kind);
  }
  // Omega and Lambda are insensitive to the reflection.
  REQUIRE(neg.invariants_used.has_value());
  const auto zy = fm::invariants(y);
  CHECK(close(neg.invariants_used->z[2], zy.z[2], 1e-14));
  CHECK(close(neg.invariants_used->z[3], zy.z[3], 1e-14));
  certify(neg, y);
}

TEST_CASE("geometry: degenerate top moments are refused") {
  CHECK_THROWS_AS(fm::classify_third(MomentVector(3, {1, 1, 1, 0})),
                  fm::degenerate_top_moment);
  CHECK_THROWS_AS(fm::classify_fourth(MomentVector(4, {1, 0, 1, 0, 0})),
                  fm::degenerate_top_moment);
  CHECK_THROWS_AS(fm::classify_third(MomentVector(4, {1, 0, 1, 0, 1})), fm::invalid_input);
  CHECK_THROWS_AS(fm::classify_fourth(MomentVector(3, {1, 0, 0, 1})), fm::invalid_input);
}

TEST_CASE("geometry: fourth order, Gaussian is a single minimum at u = 0") {
  const MomentVector y(4, {3.0 / 16, 0, 0.25, 0, 3});
  const auto report = fm::classify_fourth(y);
  CHECK(report.case_label == GeometryCase::SINGLE_MIN);
  REQUIRE(report.critical_points.size() == 1);
  CHECK(report.critical_points[0].kind == CriticalKind::minimum);
  CHECK(close(report.critical_points[0].u, 0.0, 1e-12, 1e-12));
  CHECK(close(report.critical_points[0].value, 3.0 / 16, 1e-12));
  certify(report, y);
}

TEST_CASE("geometry: fourth order, minimum side follows -sign(Lambda_4)") {
  SUBCASE("positive Omega") {
    const auto left = fm::classify_fourth(from_invariants4(1.0, 0.8, 1.3, 4.0));
    REQUIRE(left.critical_points.size() == 1);
    CHECK(left.critical_points[0].u < 0.0);

    const auto right = fm::classify_fourth(from_invariants4(1.0, 0.8, -1.3, 4.0));
    REQUIRE(right.critical_points.size() == 1);
    CHECK(right.critical_points[0].u > 0.0);
  }
  SUBCASE("negative Omega, dominant Lambda") {
    const double omega = -0.5;
    const double fold = 2.0 * std::pow(0.5, 1.5);
    const auto rep = fm::classify_fourth(from_invariants4(1.0, omega, 3.0 * fold, 9.0));
    CHECK(rep.case_label == GeometryCase::SINGLE_MIN_WITH_INFLECTIONS);
    for (const auto& cp : rep.critical_points)
      if (cp.kind == CriticalKind::minimum) CHECK(cp.u < 0.0);
  }
}

TEST_CASE("geometry: fourth order, inflection values at +-u0") {
  const double y4 = 1.4, omega = -0.6, lambda = 0.31, theta = 6.0;
  const auto y = from_invariants4(y4, omega, lambda, theta);
  const auto report = fm::classify_fourth(y);
  REQUIRE(report.u0.has_value());
  const double u0 = std::sqrt(-omega) / y4;
  CHECK(close(*report.u0, u0, 1e-12));

  const double base = theta - 5.0 * omega * omega;
  const double swing = 4.0 * std::sqrt(-omega) * lambda;
  double v_minus = 0.0, v_plus = 0.0;
  for (const auto& cp : report.critical_points) {
    if (cp.kind != CriticalKind::inflection) continue;
    if (cp.u < 0)
      v_minus = cp.value;
    else
      v_plus = cp.value;
  }
  CHECK(close(v_minus, (base - swing) / std::pow(y4, 3), 1e-10));
  CHECK(close(v_plus, (base + swing) / std::pow(y4, 3), 1e-10));
  certify(report, y);
}

TEST_CASE("geometry: fourth order, Y1 at +-u0 matches the rational forms") {
  std::mt19937_64 rng(1711);
  std::uniform_real_distribution<double> unit(0.2, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double y4 = unit(rng);
    const double omega = -unit(rng);
    const double lambda = (trial % 2 ? 1 : -1) * unit(rng);
    const double theta = 8.0 * unit(rng);
    const auto y = from_invariants4(y4, omega, lambda, theta);
    if (y[0] < 0.0) continue;
    const double u0 = std::sqrt(-omega) / y4;
    const double fold = 2.0 * std::pow(-omega, 1.5);
    CHECK(close(component_at_u(y, -u0, 1), (lambda + fold) / (y4 * y4), 1e-12, 1e-13));
    CHECK(close(component_at_u(y, +u0, 1), (lambda - fold) / (y4 * y4), 1e-12, 1e-13));
  }
}

TEST_CASE("geometry: fourth order, min-max-min structure") {
  const auto y = from_invariants4(1.0, -1.0, 0.4, 9.0);  // |Lambda| < 2|Omega|^{3/2} = 2
  const auto report = fm::classify_fourth(y);
  CHECK(report.case_label == GeometryCase::MIN_MAX_MIN);
  REQUIRE(report.critical_points.size() == 5);
  CHECK(report.critical_points[0].kind == CriticalKind::minimum);
  CHECK(report.critical_points[1].kind == CriticalKind::inflection);
  CHECK(report.critical_points[2].kind == CriticalKind::maximum);
  CHECK(report.critical_points[3].kind == CriticalKind::inflection);
  CHECK(report.critical_points[4].kind == CriticalKind::minimum);

  // Lambda > 0: the maximum falls after u = 0; extrema straddle +-u0.
  const double u0 = *report.u0;
  CHECK(report.critical_points[0].u < -u0);
  CHECK(report.critical_points[2].u > 0.0);
  CHECK(report.critical_points[4].u > u0);
  certify(report, y);

  const auto mirrored = fm::classify_fourth(from_invariants4(1.0, -1.0, -0.4, 9.0));
  CHECK(mirrored.critical_points[2].u < 0.0);
}

TEST_CASE("geometry: fourth order, boundary flip between the folded cases") {
  const double omega = -0.5;
  const double fold = 2.0 * std::pow(0.5, 1.5);
  const double theta = 6.0;

  const auto inside = fm::classify_fourth(from_invariants4(1.0, omega, fold * (1 - 1e-6), theta));
  CHECK(inside.case_label == GeometryCase::MIN_MAX_MIN);

  const auto outside = fm::classify_fourth(from_invariants4(1.0, omega, fold * (1 + 1e-6), theta));
  CHECK(outside.case_label == GeometryCase::SINGLE_MIN_WITH_INFLECTIONS);

  const auto exact = fm::classify_fourth(from_invariants4(1.0, omega, fold, theta));
  CHECK(exact.case_label == GeometryCase::SINGLE_MIN_WITH_INFLECTIONS);
  CHECK(exact.boundary);

  const auto negative = fm::classify_fourth(from_invariants4(1.0, omega, -fold, theta));
  CHECK(negative.case_label == GeometryCase::SINGLE_MIN_WITH_INFLECTIONS);
  CHECK(negative.boundary);
  certify(negative, from_invariants4(1.0, omega, -fold, theta));
}

TEST_CASE("geometry: classification is invariant under time translation") {
  std::mt19937_64 rng(40351);
  std::uniform_real_distribution<double> times(-3.0, 3.0);
  int done3 = 0, done4 = 0;
  while (done3 < 150 || done4 < 150) {
    if (done3 < 150) {
      auto y = fmtest::random_moments(rng, 3);
      if (std::fabs(y[3]) >= 0.25) {
        const auto base = fm::classify_third(y);
        const auto moved = fm::classify_third(fm::propagate(y, times(rng)));
        CHECK(base.case_label == moved.case_label);
        REQUIRE(base.critical_points.size() == moved.critical_points.size());
        for (std::size_t i = 0; i < base.critical_points.size(); ++i) {
          CHECK(close(base.critical_points[i].u, moved.critical_points[i].u, 1e-8, 1e-10));
          CHECK(close(base.critical_points[i].value, moved.critical_points[i].value, 1e-8,
                      1e-10));
        }
        ++done3;
      }
    }
    if (done4 < 150) {
      auto y = fmtest::random_moments(rng, 4);
      auto vals = y.values;
      vals[0] = std::fabs(vals[0]) + 0.1;
      vals[4] = std::fabs(vals[4]) + 0.25;
      y = MomentVector(4, vals, y.mass);
      const double t = times(rng);
      const auto moved_vec = fm::propagate(y, t);
      if (moved_vec[0] < 0.0) continue;  // quartic dips below zero: skip strict input
      const auto base = fm::classify_fourth(y, true);
      const auto moved = fm::classify_fourth(moved_vec, true);
      CHECK(base.case_label == moved.case_label);
      REQUIRE(base.critical_points.size() == moved.critical_points.size());
      for (std::size_t i = 0; i < base.critical_points.size(); ++i) {
        CHECK(close(base.critical_points[i].u, moved.critical_points[i].u, 1e-8, 1e-10));
        CHECK(close(base.critical_points[i].value, moved.critical_points[i].value, 1e-8,
                    1e-10));
      }
      ++done4;
    }
  }
}

TEST_CASE("geometry: randomized sweep with residual certification") {
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    auto y3 = fmtest::random_moments(rng, 3);
    const auto rep3 = fm::classify_third(y3);
    const auto z3 = fm::invariants(y3);
    if (z3.z[2] >= 0.0)
      CHECK(rep3.case_label == GeometryCase::MONOTONE_INFLECTION);
    else
      CHECK(rep3.case_label == GeometryCase::MAX_INFLECTION_MIN);
    certify(rep3, y3);

    const double y4 = 0.25 + std::fabs(unit(rng));
    const double omega = unit(rng);
    const double lambda = unit(rng);
    const double theta = 6.0 + unit(rng);
    const auto y = from_invariants4(y4, omega, lambda, theta);
    if (y[0] < 0.0) continue;
    const auto rep4 = fm::classify_fourth(y);
    if (omega > 0.0)
      CHECK(rep4.case_label == GeometryCase::SINGLE_MIN);
    else if (std::fabs(lambda) >= 2.0 * std::pow(-omega, 1.5))
      CHECK(rep4.case_label == GeometryCase::SINGLE_MIN_WITH_INFLECTIONS);
    else
      CHECK(rep4.case_label == GeometryCase::MIN_MAX_MIN);
    certify(rep4, y);
  }
}

TEST_CASE("geometry: real initial wavefunction closed forms") {
  SUBCASE("y2 < 0: max at 0, inflections at +-u0, minima at +-sqrt(3) u0") {
    const auto report = fm::real_initial_fourth(1.0, -1.0, 1.0);
    CHECK(report.case_label == GeometryCase::MIN_MAX_MIN);
    REQUIRE(report.critical_points.size() == 5);
    CHECK(close(report.critical_points[0].u, -std::sqrt(3.0), 1e-12));
    CHECK(close(report.critical_points[0].value, -8.0, 1e-12));
    CHECK(close(report.critical_points[1].u, -1.0, 1e-12));
    CHECK(close(report.critical_points[1].value, -4.0, 1e-12));
    CHECK(report.critical_points[2].u == 0.0);
    CHECK(report.critical_points[2].value == 1.0);
    CHECK(report.critical_points[2].kind == CriticalKind::maximum);
    CHECK(close(report.critical_points[4].u, std::sqrt(3.0), 1e-12));

    // Agreement with the generic classifier on the same moments.
    const MomentVector y(4, {1.0, 0.0, -1.0, 0.0, 1.0});
    const auto generic = fm::classify_fourth(y);
    REQUIRE(generic.critical_points.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(close(generic.critical_points[i].u, report.critical_points[i].u, 1e-10, 1e-12));
      CHECK(close(generic.critical_points[i].value, report.critical_points[i].value, 1e-10,
                  1e-12));
      CHECK(generic.critical_points[i].kind == report.critical_points[i].kind);
    }

    // Y_0 returns to y_0 at +-sqrt(6) u0.
    CHECK(close(component_at_u(y, std::sqrt(6.0), 0), 1.0, 1e-12));
    CHECK(close(component_at_u(y, -std::sqrt(6.0), 0), 1.0, 1e-12));
  }
  SUBCASE("y2 >= 0: single minimum of value y0 at u = 0") {
    const auto report = fm::real_initial_fourth(0.7, 0.4, 1.3);
    CHECK(report.case_label == GeometryCase::SINGLE_MIN);
    REQUIRE(report.critical_points.size() == 1);
    CHECK(report.critical_points[0].u == 0.0);
    CHECK(report.critical_points[0].value == 0.7);
  }
  CHECK_THROWS_AS(fm::real_initial_fourth(1.0, 0.0, -1.0), fm::error);
}

TEST_CASE("geometry: special case y3 = 0 is quadratic evolution") {
  SUBCASE("vertex of the parabola") {
    const auto report = fm::special_case_topzero(MomentVector(3, {0, 1, 1, 0}));
    CHECK(report.case_label == GeometryCase::QUADRATIC_EXTREMUM);
    REQUIRE(report.critical_points.size() == 1);
    CHECK(close(report.critical_points[0].u, -0.5, 1e-14));
    CHECK(close(report.critical_points[0].value, -0.75, 1e-14));
    CHECK(report.critical_points[0].kind == CriticalKind::minimum);
  }
  SUBCASE("real initial wavefunction sits at t = 0") {
    const auto report = fm::special_case_topzero(MomentVector(3, {0.4, 0, 0.9, 0}));
    REQUIRE(report.critical_points.size() == 1);
    CHECK(report.critical_points[0].u == 0.0);
    CHECK(report.critical_points[0].value == 0.4);
  }
  SUBCASE("y2 < 0 is a maximum") {
    const auto report = fm::special_case_topzero(MomentVector(3, {0.4, 0, -0.9, 0}));
    REQUIRE(report.critical_points.size() == 1);
    CHECK(report.critical_points[0].kind == CriticalKind::maximum);
  }
  SUBCASE("y2 = 0 leaves no critical points") {
    const auto report = fm::special_case_topzero(MomentVector(3, {1, 0, 0, 0}));
    CHECK(report.case_label == GeometryCase::NO_CRITICAL_POINTS);
    CHECK(report.critical_points.empty());
  }
  CHECK_THROWS_AS(fm::special_case_topzero(MomentVector(3, {0, 1, 1, 0.5})),
                  fm::invalid_input);
}

TEST_CASE("geometry: raw flag admits classical-shaped data") {
  // Negative y0 passes under raw.
  const MomentVector dipped(4, {-0.5, 0.0, 1.0, 0.0, 1.0});
  CHECK_THROWS_AS(fm::classify_fourth(dipped), fm::invalid_input);
  const auto raw = fm::classify_fourth(dipped, true);
  CHECK(raw.case_label == GeometryCase::SINGLE_MIN);

  // Negative y4 classifies the negated profile with extremum kinds swapped.
  const MomentVector flipped(4, {-1.0, 0.0, 1.0, 0.0, -1.0});
  CHECK_THROWS_AS(fm::classify_fourth(flipped), fm::invalid_input);
  const auto neg = fm::classify_fourth(flipped, true);
  const auto ref = fm::classify_fourth(MomentVector(4, {1.0, 0.0, -1.0, 0.0, 1.0}), true);
  REQUIRE(neg.critical_points.size() == ref.critical_points.size());
  for (std::size_t i = 0; i < neg.critical_points.size(); ++i) {
    CHECK(close(neg.critical_points[i].u, ref.critical_points[i].u, 1e-12, 1e-14));
    CHECK(close(neg.critical_points[i].value, -ref.critical_points[i].value, 1e-12, 1e-14));
    const auto kind = ref.critical_points[i].kind;
    if (kind == CriticalKind::minimum)
      CHECK(neg.critical_points[i].kind == CriticalKind::maximum);
    else if (kind == CriticalKind::maximum)
      CHECK(neg.critical_points[i].kind == CriticalKind::minimum);
    else
      CHECK(neg.critical_points[i].kind == CriticalKind::inflection);
  }
}

TEST_CASE("geometry: enum names are stable") {
  CHECK(std::string(fm::to_string(GeometryCase::SINGLE_MIN)) == "SINGLE_MIN");
  CHECK(std::string(fm::to_string(GeometryCase::MAX_INFLECTION_MIN)) == "MAX_INFLECTION_MIN");
  CHECK(std::string(fm::to_string(CriticalKind::minimum)) == "minimum");
  CHECK(std::string(fm::to_string(CriticalKind::inflection)) == "inflection");
}
