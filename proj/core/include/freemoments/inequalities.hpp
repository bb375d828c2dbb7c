#pragma once

#include <string>
#include <vector>

#include "freemoments/moments.hpp"

namespace fm {

enum class InequalityName {
  SCHRODINGER_2,  // Omega_2 >= hbar^2/4
  HEISENBERG_2,   // Y_0 Y_2 >= hbar^2/4
  OMEGA4_BOUND,   // Omega_4 >= (p2^2 - p4/4) hbar^2
  Y2_BOUND,       // Y_2 >= (p2^2/p4 - 1/4) hbar^2, parity-definite states
  EVEN_PRODUCT,   // y_0 y_n >= c_n hbar^n, c_2 = 1/4, c_4 = 3/8
  KURT_SKEW_X,    // m4/m2^2 >= m3^2/m2^3 for position moments
  KURT_SKEW_P,    // the same for momentum moments
};

enum class Provenance { quantum, classical };

const char* to_string(InequalityName n);
const char* to_string(Provenance p);

// One evaluated bound. satisfied applies the tolerance
// lhs >= rhs - max(1e-10, 1e-6 |rhs|) so saturating states sitting exactly
// on the boundary pass. saturation_ratio is sign-aware: rhs/lhs when both
// are positive, lhs/rhs when both are negative, 1 when both are zero, and 0
// for opposite signs — <= 1 for satisfied inequalities and -> 1 at
// saturation from either side of zero.
struct InequalityReport {
  InequalityName name = InequalityName::SCHRODINGER_2;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // lhs - rhs
  bool satisfied = false;
  double saturation_ratio = 0.0;
  Provenance provenance = Provenance::quantum;
};

InequalityReport make_inequality_report(InequalityName name, double lhs, double rhs,
                                        Provenance prov = Provenance::quantum);

// Omega_2 >= hbar^2/4 plus the weaker Heisenberg product Y_0 Y_2 >= hbar^2/4,
// from second-order moments. Returns {SCHRODINGER_2, HEISENBERG_2}.
std::vector<InequalityReport> check_schrodinger(const MomentVector& y,
                                                Provenance prov = Provenance::quantum);

// Omega_4 >= (p2^2 - p4/4) hbar^2 with p2 = <P^2>, p4 = <P^4> measured on the
// same state. With parity_definite = true (even or odd wavefunction) the
// Y_2 >= (p2^2/p4 - 1/4) hbar^2 form is appended. Throws invalid_input when
// p4 <= 0.
std::vector<InequalityReport> check_omega4_bound(const MomentVector& y, double p2,
                                                 double p4, bool parity_definite = false,
                                                 Provenance prov = Provenance::quantum);

// y_0 y_n >= c_n hbar^n for n in {2, 4}; other n throws invalid_input
// (the constant is not known here).
InequalityReport check_even_product(double y0, double yn, int n, double hbar,
                                    Provenance prov = Provenance::quantum);

// m4/m2^2 >= m3^2/m2^3 (kurtosis vs squared skewness), for position or
// momentum moments alike; momentum_axis only selects the report name.
InequalityReport check_kurtosis_skewness(double m2, double m3, double m4,
                                         bool momentum_axis = false,
                                         Provenance prov = Provenance::quantum);

}  // namespace fm
