#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "freemoments/moments.hpp"

namespace fm {

// N free classical particles of equal mass. Immutable value; N >= 2 and all
// entries finite are enforced at construction.
struct ParticleEnsemble {
  std::vector<double> positions;
  std::vector<double> momenta;
  double mass = 1.0;

  ParticleEnsemble() = default;
  ParticleEnsemble(std::vector<double> x, std::vector<double> p, double m = 1.0);

  std::size_t size() const { return positions.size(); }
};

// positions <- positions + momenta * t / m; momenta unchanged.
ParticleEnsemble drift(const ParticleEnsemble& e, double t);

// mean over particles of P^k X^{n-k}, deviations taken about the ensemble
// centroid (so the k=0, n=1 moment is identically zero).
double ensemble_moment(const ParticleEnsemble& e, int k, int n);

// All components of order n, packaged for the shared evolution law.
MomentVector ensemble_moments(const ParticleEnsemble& e, int n, double hbar = 1.0);

// Y2 Y4 - Y3^2 of the order-4 ensemble moments. Cauchy-Schwarz on the
// empirical measure keeps this >= 0 up to rounding for every ensemble.
double classical_omega4(const ParticleEnsemble& e);

// Magnitude scale for the rounding floor of classical_omega4.
double classical_omega4_scale(const ParticleEnsemble& e);

// Correlated Gaussian cloud for property sweeps: x ~ N(mean_x, sigma_x),
// p = mean_p + sigma_p (rho xi + sqrt(1-rho^2) eta) with xi the x deviate.
ParticleEnsemble random_ensemble(std::mt19937_64& rng, std::size_t n,
                                 double mean_x = 0.0, double sigma_x = 1.0,
                                 double mean_p = 0.0, double sigma_p = 1.0,
                                 double rho = 0.0, double mass = 1.0);

}  // namespace fm
