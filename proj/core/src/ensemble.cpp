#include "freemoments/ensemble.hpp"

#include <cmath>

namespace fm {

ParticleEnsemble::ParticleEnsemble(std::vector<double> x, std::vector<double> p, double m)
    : positions(std::move(x)), momenta(std::move(p)), mass(m) {
  if (positions.size() != momenta.size())
    throw invalid_input("position and momentum arrays must have equal length");
  if (positions.size() < 2)
    throw invalid_input("an ensemble needs at least two particles");
  for (double v : positions)
    if (!std::isfinite(v)) throw invalid_input("positions must be finite");
  for (double v : momenta)
    if (!std::isfinite(v)) throw invalid_input("momenta must be finite");
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw invalid_input("mass must be positive and finite");
}

ParticleEnsemble drift(const ParticleEnsemble& e, double t) {
  if (!std::isfinite(t)) throw invalid_input("drift time must be finite");
  ParticleEnsemble out = e;
  const double tau = t / e.mass;
  for (std::size_t i = 0; i < out.size(); ++i) out.positions[i] += out.momenta[i] * tau;
  return out;
}

namespace {

struct Deviations {
  std::vector<double> dx;
  std::vector<double> dp;
};

Deviations centered(const ParticleEnsemble& e) {
  if (e.size() < 2) throw invalid_input("an ensemble needs at least two particles");
  const auto n = static_cast<double>(e.size());
  long double xbar = 0.0L, pbar = 0.0L;
  for (double v : e.positions) xbar += v;
  for (double v : e.momenta) pbar += v;
  xbar /= n;
  pbar /= n;

  Deviations d;
  d.dx.resize(e.size());
  d.dp.resize(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    d.dx[i] = e.positions[i] - static_cast<double>(xbar);
    d.dp[i] = e.momenta[i] - static_cast<double>(pbar);
  }
  return d;
}

double mixed_mean(const Deviations& d, int k, int n) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < d.dx.size(); ++i) {
    long double term = 1.0L;
    for (int j = 0; j < k; ++j) term *= d.dp[i];
    for (int j = 0; j < n - k; ++j) term *= d.dx[i];
    acc += term;
  }
  return static_cast<double>(acc / static_cast<long double>(d.dx.size()));
}

}  // namespace

double ensemble_moment(const ParticleEnsemble& e, int k, int n) {
  if (n < 1 || n > max_order) throw invalid_input("moment order out of range");
  if (k < 0 || k > n) throw invalid_input("component index must satisfy 0 <= k <= n");
  return mixed_mean(centered(e), k, n);
}

MomentVector ensemble_moments(const ParticleEnsemble& e, int n, double hbar) {
  if (n < 1 || n > max_order) throw invalid_input("moment order out of range");
  const Deviations d = centered(e);
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) values[k] = mixed_mean(d, k, n);
  return MomentVector(n, std::move(values), e.mass, hbar);
}

double classical_omega4(const ParticleEnsemble& e) {
  const Deviations d = centered(e);
  const double y2 = mixed_mean(d, 2, 4);
  const double y3 = mixed_mean(d, 3, 4);
  const double y4 = mixed_mean(d, 4, 4);
  return y2 * y4 - y3 * y3;
}

double classical_omega4_scale(const ParticleEnsemble& e) {
  const Deviations d = centered(e);
  const double y2 = mixed_mean(d, 2, 4);
  const double y3 = mixed_mean(d, 3, 4);
  const double y4 = mixed_mean(d, 4, 4);
  return std::fabs(y2 * y4) + y3 * y3;
}

ParticleEnsemble random_ensemble(std::mt19937_64& rng, std::size_t n, double mean_x,
                                 double sigma_x, double mean_p, double sigma_p,
                                 double rho, double mass) {
  if (n < 2) throw invalid_input("an ensemble needs at least two particles");
  if (!(sigma_x > 0.0) || !(sigma_p > 0.0))
    throw invalid_input("spreads must be positive");
  if (!(std::fabs(rho) <= 1.0))
    throw invalid_input("correlation must lie in [-1, 1]");

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(n), p(n);
  const double ortho = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = gauss(rng);
    const double eta = gauss(rng);
    x[i] = mean_x + sigma_x * xi;
    p[i] = mean_p + sigma_p * (rho * xi + ortho * eta);
  }
  return ParticleEnsemble(std::move(x), std::move(p), mass);
}

}  // namespace fm
