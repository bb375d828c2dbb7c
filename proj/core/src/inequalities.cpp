#include "freemoments/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace fm {

const char* to_string(InequalityName n) {
  switch (n) {
    case InequalityName::SCHRODINGER_2: return "SCHRODINGER_2";
    case InequalityName::HEISENBERG_2: return "HEISENBERG_2";
    case InequalityName::OMEGA4_BOUND: return "OMEGA4_BOUND";
    case InequalityName::Y2_BOUND: return "Y2_BOUND";
    case InequalityName::EVEN_PRODUCT: return "EVEN_PRODUCT";
    case InequalityName::KURT_SKEW_X: return "KURT_SKEW_X";
    case InequalityName::KURT_SKEW_P: return "KURT_SKEW_P";
  }
  return "UNKNOWN";
}

const char* to_string(Provenance p) {
  return p == Provenance::quantum ? "quantum" : "classical";
}

InequalityReport make_inequality_report(InequalityName name, double lhs, double rhs,
                                        Provenance prov) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs))
    throw invalid_input("inequality sides must be finite");

  InequalityReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  r.satisfied = lhs >= rhs - std::max(1e-10, 1e-6 * std::fabs(rhs));
  if (lhs > 0.0 && rhs > 0.0)
    r.saturation_ratio = rhs / lhs;
  else if (lhs < 0.0 && rhs < 0.0)
    r.saturation_ratio = lhs / rhs;
  else if (lhs == 0.0 && rhs == 0.0)
    r.saturation_ratio = 1.0;
  else
    r.saturation_ratio = 0.0;
  r.provenance = prov;
  return r;
}

std::vector<InequalityReport> check_schrodinger(const MomentVector& y, Provenance prov) {
  if (y.order != 2) throw invalid_input("the Schrodinger bound is second order");
  const double y0 = y.values[0], y1 = y.values[1], y2 = y.values[2];
  const double floor = y.hbar * y.hbar / 4.0;
  return {
      make_inequality_report(InequalityName::SCHRODINGER_2, y0 * y2 - y1 * y1, floor, prov),
      make_inequality_report(InequalityName::HEISENBERG_2, y0 * y2, floor, prov),
  };
}

std::vector<InequalityReport> check_omega4_bound(const MomentVector& y, double p2,
                                                 double p4, bool parity_definite,
                                                 Provenance prov) {
  if (y.order != 4) throw invalid_input("the Omega_4 bound is fourth order");
  if (!(p4 > 0.0) || !std::isfinite(p4))
    throw invalid_input("<P^4> must be positive and finite");
  if (!(p2 >= 0.0) || !std::isfinite(p2))
    throw invalid_input("<P^2> must be non-negative and finite");

  const double h2 = y.hbar * y.hbar;
  const double omega4 = y.values[2] * y.values[4] - y.values[3] * y.values[3];
  std::vector<InequalityReport> out;
  out.push_back(make_inequality_report(InequalityName::OMEGA4_BOUND, omega4,
                                       (p2 * p2 - p4 / 4.0) * h2, prov));
  if (parity_definite)
    out.push_back(make_inequality_report(InequalityName::Y2_BOUND, y.values[2],
                                         (p2 * p2 / p4 - 0.25) * h2, prov));
  return out;
}

InequalityReport check_even_product(double y0, double yn, int n, double hbar,
                                    Provenance prov) {
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw invalid_input("hbar must be positive and finite");
  double cn = 0.0;
  if (n == 2)
    cn = 0.25;
  else if (n == 4)
    cn = 0.375;
  else
    throw invalid_input("the even-product constant is only known for n = 2 and n = 4");
  return make_inequality_report(InequalityName::EVEN_PRODUCT, y0 * yn,
                                cn * std::pow(hbar, n), prov);
}

InequalityReport check_kurtosis_skewness(double m2, double m3, double m4,
                                         bool momentum_axis, Provenance prov) {
  if (!(m2 > 0.0) || !std::isfinite(m2))
    throw invalid_input("the second moment must be positive and finite");
  if (!std::isfinite(m3) || !std::isfinite(m4))
    throw invalid_input("moments must be finite");
  const InequalityName name =
      momentum_axis ? InequalityName::KURT_SKEW_P : InequalityName::KURT_SKEW_X;
  return make_inequality_report(name, m4 / (m2 * m2), m3 * m3 / (m2 * m2 * m2), prov);
}

}  // namespace fm
