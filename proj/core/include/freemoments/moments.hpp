#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "freemoments/errors.hpp"

namespace fm {

// Orders above this are numerically meaningless in double precision; the
// binomial table stops here and higher requests are rejected.
inline constexpr int max_order = 64;

// C(n, k) as an exact double, from a precomputed table (0 <= k <= n <= 64).
double binomial(int n, int k);

// Order-n symmetrized moments y_0..y_n taken about the centroid.
// values[k] averages k momentum-deviation and n-k position-deviation factors
// over all orderings, so it carries units length^(n-k) * momentum^k.
struct MomentVector {
  int order = 0;
  std::vector<double> values;
  double mass = 1.0;
  double hbar = 1.0;

  MomentVector() = default;
  MomentVector(int n, std::vector<double> vals, double m = 1.0, double hb = 1.0);

  double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }

  // True when the positivity expected of quantum states at even order holds
  // (y_0 > 0 and y_n > 0 for even n). Informative, not enforced.
  bool physical_even() const;
};

// First moments: centroid position and (conserved) mean momentum.
struct CentroidState {
  double x0 = 0.0;
  double p = 0.0;
  double mass = 1.0;
};

// The combinations Z_0..Z_n of order-n moments that free evolution leaves
// unchanged, plus the reference time t0 at which the moments expose them
// directly, and the (itself invariant) top moment y_n.
// Z_0 = 1 and Z_1 = 0 identically; Z_2, Z_3, Z_4 are the Omega, Lambda,
// Theta combinations of the order at hand.
struct InvariantSet {
  int order = 0;
  std::vector<double> z;
  double t0 = 0.0;
  double yn = 0.0;
  // Carried for reconstruction; serialized forms omit them (defaults 1).
  double mass = 1.0;
  double hbar = 1.0;
};

// Exact polynomial-in-time evolution:
//   Y_k(t) = sum_{l=0}^{n-k} C(n-k, l) (t/m)^l y_{k+l}.
// The top component is copied, never recomputed. Throws invalid_input on
// non-finite t.
MomentVector propagate(const MomentVector& y, double t);

// d_t Y_k = (n-k) Y_{k+1} / m for k < n, and 0 for k = n.
std::vector<double> derivative(const MomentVector& y);

// t0 = -m y_{n-1} / y_n. Throws degenerate_top_moment when y_n == 0.
double reference_time(const MomentVector& y);

// Z_l = sum_{j=0}^{l-2} C(l,j) y_{n-l+j} (-y_{n-1})^j y_n^{l-1-j}
//       - (l-1) (-y_{n-1})^l        (division-free form),
// accumulated in long double. Throws degenerate_top_moment when y_n == 0.
InvariantSet invariants(const MomentVector& y);

// Magnitude scale of each Z_l: the same polynomial with every term taken in
// absolute value. This is the natural denominator for relative drift of an
// invariant whose value is produced by cancellation (possibly to zero).
std::vector<double> invariant_scale(const MomentVector& y);

// Reconstruction at scaled time u = (t - t0)/m:
//   Y_k = sum_{j=0}^{n-k} C(n-k, j) Z_{n-k-j} u^j / y_n^{n-k-j-1}.
// Round-trips with invariants(): feeding u = (t-t0)/m reproduces
// propagate(y, t).
MomentVector moments_from_invariants(const InvariantSet& zset, double u);

// For order 2 with y_2 > 0: the time and value of the minimum of Y_0,
// (t_min, Y0_min) = (-m y_1/y_2, Omega_2/y_2).
std::pair<double, double> second_order_waist(const MomentVector& y);

// x0 <- x0 + p t / m; p unchanged.
CentroidState centroid_evolve(const CentroidState& c, double t);

}  // namespace fm
