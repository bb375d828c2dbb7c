#include "freemoments/moments.hpp"

#include <array>
#include <cmath>
#include <string>

namespace fm {

namespace {

// Pascal's triangle up to max_order; every entry below row 64 is exactly
// representable in a double (largest is C(64,32) ~ 1.8e18 < 2^62).
struct BinomialTable {
  std::array<std::array<double, max_order + 1>, max_order + 1> c{};
  BinomialTable() {
    for (int n = 0; n <= max_order; ++n) {
      c[n][0] = 1.0;
      c[n][n] = 1.0;
      for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
    }
  }
};

const BinomialTable& table() {
  static const BinomialTable t;
  return t;
}

void require_valid(const MomentVector& y) {
  if (y.order < 1 || y.order > max_order)
    throw invalid_input("moment order must be in [1, " + std::to_string(max_order) +
                        "], got " + std::to_string(y.order));
  if (y.values.size() != static_cast<std::size_t>(y.order) + 1)
    throw invalid_input("moment array length must be order+1");
  for (double v : y.values)
    if (!std::isfinite(v)) throw invalid_input("moment entries must be finite");
  if (!(y.mass > 0.0) || !std::isfinite(y.mass))
    throw invalid_input("mass must be positive and finite");
  if (!(y.hbar > 0.0) || !std::isfinite(y.hbar))
    throw invalid_input("hbar must be positive and finite");
}

}  // namespace

double binomial(int n, int k) {
  if (n < 0 || n > max_order || k < 0 || k > n)
    throw invalid_input("binomial arguments out of range");
  return table().c[n][k];
}

MomentVector::MomentVector(int n, std::vector<double> vals, double m, double hb)
    : order(n), values(std::move(vals)), mass(m), hbar(hb) {
  require_valid(*this);
}

bool MomentVector::physical_even() const {
  if (order % 2 != 0) return true;  // positivity is an even-order statement
  return values.front() > 0.0 && values.back() > 0.0;
}

MomentVector propagate(const MomentVector& y, double t) {
  require_valid(y);
  if (!std::isfinite(t)) throw invalid_input("propagation time must be finite");

  const int n = y.order;
  const double tau = t / y.mass;
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) {
    long double acc = 0.0L;
    long double tau_pow = 1.0L;
    for (int l = 0; l <= n - k; ++l) {
      acc += static_cast<long double>(binomial(n - k, l)) * tau_pow * y.values[k + l];
      tau_pow *= tau;
    }
    out[k] = static_cast<double>(acc);
  }
  out[n] = y.values[n];  // the top moment is conserved, no arithmetic touches it

  MomentVector result;
  result.order = n;
  result.values = std::move(out);
  result.mass = y.mass;
  result.hbar = y.hbar;
  return result;
}

std::vector<double> derivative(const MomentVector& y) {
  require_valid(y);
  const int n = y.order;
  std::vector<double> d(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k < n; ++k)
    d[k] = static_cast<double>(n - k) * y.values[k + 1] / y.mass;
  return d;
}

double reference_time(const MomentVector& y) {
  require_valid(y);
  const double yn = y.values[y.order];
  if (yn == 0.0)
    throw degenerate_top_moment("top moment is zero; no reference time exists");
  return -y.mass * y.values[y.order - 1] / yn;
}

InvariantSet invariants(const MomentVector& y) {
  require_valid(y);
  const int n = y.order;
  const long double yn = y.values[n];
  if (yn == 0.0L)
    throw degenerate_top_moment("top moment is zero; invariants are undefined");
  const long double neg_yn1 = -static_cast<long double>(y.values[n - 1]);

  InvariantSet zs;
  zs.order = n;
  zs.z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  zs.z[0] = 1.0;
  if (n >= 1) zs.z[1] = 0.0;
  for (int l = 2; l <= n; ++l) {
    long double acc = 0.0L;
    long double neg_pow = 1.0L;  // (-y_{n-1})^j
    for (int j = 0; j <= l - 2; ++j) {
      long double yn_pow = 1.0L;  // y_n^{l-1-j}
      for (int e = 0; e < l - 1 - j; ++e) yn_pow *= yn;
      acc += static_cast<long double>(binomial(l, j)) * y.values[n - l + j] * neg_pow * yn_pow;
      neg_pow *= neg_yn1;
    }
    // remaining factor: neg_pow is now (-y_{n-1})^{l-1}
    acc -= static_cast<long double>(l - 1) * neg_pow * neg_yn1;
    zs.z[l] = static_cast<double>(acc);
  }
  zs.yn = y.values[n];
  zs.t0 = reference_time(y);
  zs.mass = y.mass;
  zs.hbar = y.hbar;
  return zs;
}

std::vector<double> invariant_scale(const MomentVector& y) {
  require_valid(y);
  const int n = y.order;
  const long double ayn = std::fabs(static_cast<long double>(y.values[n]));
  const long double ayn1 = std::fabs(static_cast<long double>(y.values[n - 1]));

  std::vector<double> s(static_cast<std::size_t>(n) + 1, 1.0);
  for (int l = 2; l <= n; ++l) {
    long double acc = 0.0L;
    long double neg_pow = 1.0L;
    for (int j = 0; j <= l - 2; ++j) {
      long double yn_pow = 1.0L;
      for (int e = 0; e < l - 1 - j; ++e) yn_pow *= ayn;
      acc += static_cast<long double>(binomial(l, j)) *
             std::fabs(static_cast<long double>(y.values[n - l + j])) * neg_pow * yn_pow;
      neg_pow *= ayn1;
    }
    acc += static_cast<long double>(l - 1) * neg_pow * ayn1;
    s[l] = static_cast<double>(acc);
  }
  return s;
}

MomentVector moments_from_invariants(const InvariantSet& zset, double u) {
  const int n = zset.order;
  if (n < 1 || n > max_order) throw invalid_input("invariant set order out of range");
  if (zset.z.size() != static_cast<std::size_t>(n) + 1)
    throw invalid_input("invariant array length must be order+1");
  if (zset.yn == 0.0)
    throw degenerate_top_moment("top moment is zero; reconstruction is undefined");
  if (!std::isfinite(u)) throw invalid_input("scaled time must be finite");

  const long double yn = zset.yn;
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    long double acc = 0.0L;
    long double u_pow = 1.0L;
    for (int j = 0; j <= n - k; ++j) {
      // divide by y_n^{n-k-j-1}; the exponent is -1 for the j = n-k term
      const int e = n - k - j - 1;
      long double term = static_cast<long double>(binomial(n - k, j)) * zset.z[n - k - j] * u_pow;
      if (e > 0) {
        long double yn_pow = 1.0L;
        for (int i = 0; i < e; ++i) yn_pow *= yn;
        term /= yn_pow;
      } else if (e < 0) {
        term *= yn;  // e is never below -1
      }
      acc += term;
      u_pow *= u;
    }
    out[k] = static_cast<double>(acc);
  }
  return MomentVector(n, std::move(out), zset.mass, zset.hbar);
}

std::pair<double, double> second_order_waist(const MomentVector& y) {
  require_valid(y);
  if (y.order != 2) throw invalid_input("waist is a second-order quantity");
  const double y0 = y.values[0], y1 = y.values[1], y2 = y.values[2];
  if (!(y2 > 0.0)) throw invalid_input("second momentum moment must be positive");
  const double t_min = -y.mass * y1 / y2;
  const double omega2 = y0 * y2 - y1 * y1;
  return {t_min, omega2 / y2};
}

CentroidState centroid_evolve(const CentroidState& c, double t) {
  if (!std::isfinite(t)) throw invalid_input("evolution time must be finite");
  if (!(c.mass > 0.0) || !std::isfinite(c.mass))
    throw invalid_input("mass must be positive and finite");
  CentroidState out = c;
  out.x0 = c.x0 + c.p * t / c.mass;
  return out;
}

}  // namespace fm
