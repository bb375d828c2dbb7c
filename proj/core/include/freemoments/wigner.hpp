#pragma once

#include <cstddef>
#include <vector>

#include "freemoments/wavefunction.hpp"

namespace fm {

// W(x, p) sampled on a phase-space grid. Rows run over x, columns over p.
// The p band is half the spectral band of the x grid (the factor 2 in the
// transform kernel), p_k = pi hbar k / (N dx) for k in [-N/2, N/2).
struct WignerGrid {
  std::vector<double> values;  // row-major, size nx * np
  std::size_t nx = 0;
  std::size_t np = 0;
  double x_min = 0.0;
  double dx = 1.0;
  double p_min = 0.0;
  double dp = 1.0;
  double hbar = 1.0;

  double at(std::size_t ix, std::size_t ip) const { return values[ix * np + ip]; }
  double x_at(std::size_t ix) const { return x_min + static_cast<double>(ix) * dx; }
  double p_at(std::size_t ip) const { return p_min + static_cast<double>(ip) * dp; }
};

// Row-wise transform of psi*(x+s) psi(x-s):
//   W(x_i, p_k) = (dx / (pi hbar)) Re sum_j g_j exp(+2 pi i j k / N).
// With this discretization the p-sum collapses each row to |psi(x_i)|^2, so
// the x-marginal and the total integral are exact; the p-marginal reproduces
// |psi~(p)|^2 to discretization accuracy. Inputs are normalized internally.
// Throws resolution_error when the momentum content approaches the half-band
// edge.
WignerGrid wigner_transform(const GridWavefunction& psi);

// integral W dx dp (== 1 for a normalized input, by construction).
double wigner_total(const WignerGrid& w);

// integral W dp at each x (length nx), and integral W dx at each p (length np).
std::vector<double> wigner_marginal_x(const WignerGrid& w);
std::vector<double> wigner_marginal_p(const WignerGrid& w);

Centroid wigner_centroid(const WignerGrid& w);

// integral W (p - <p>)^k (x - <x>)^{n-k} dx dp / integral W: the phase-space
// oracle for the symmetrized moments. Throws convergence_error when the
// integrand still carries weight at the grid boundary.
double wigner_moment(const WignerGrid& w, int k, int n);

}  // namespace fm
