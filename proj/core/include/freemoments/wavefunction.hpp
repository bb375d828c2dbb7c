#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "freemoments/moments.hpp"

namespace fm {

// Complex amplitudes on a uniform spatial grid. Spectral operations require
// the size to be a power of two (checked at their entry points).
struct GridWavefunction {
  std::vector<std::complex<double>> amplitudes;
  double x_min = 0.0;
  double dx = 1.0;
  double hbar = 1.0;
  double mass = 1.0;

  std::size_t size() const { return amplitudes.size(); }
  double x_at(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }

  // sum |psi|^2 dx
  double norm_squared() const;

  // Copy scaled to norm_squared() == 1. Throws invalid_input when the norm
  // is zero or not finite.
  GridWavefunction normalized() const;
};

struct Centroid {
  double x = 0.0;
  double p = 0.0;
};

// <x> from the density and <p> from the spectral derivative.
Centroid centroid(const GridWavefunction& psi);

// Weyl-ordered moment Y_k of order n about the centroid: the mean over all
// C(n, k) distinct orderings of k momentum-deviation and n-k
// position-deviation operators applied to psi (momentum spectrally, on a
// grid zero-padded by 4x), inner product with psi, real part taken.
// Normalization of the input is handled internally.
//
// Throws resolution_error when the spectral tail carries relative energy
// above 1e-8, and convergence_error when the position tail of the weighted
// integrand has not decayed at the grid edge.
double symmetrized_moment(const GridWavefunction& psi, int k, int n);

// Same computation, returning the complex inner product before the real
// part is taken: the imaginary residual is a numerical-health diagnostic
// (symmetrized moments are real).
std::complex<double> symmetrized_moment_raw(const GridWavefunction& psi, int k, int n);

// All components of order n at once, as a MomentVector.
MomentVector measure_moments(const GridWavefunction& psi, int n);

// Plain density moments: <(x - <x>)^j> for j = 0..jmax.
std::vector<double> position_moments(const GridWavefunction& psi, int jmax);

// Exact free evolution: momentum amplitudes pick up exp(-i p^2 t / (2 m hbar)).
// Norm is preserved to rounding. Throws boundary_overflow when the evolved
// density at the grid edge exceeds 1e-10 of the peak.
GridWavefunction free_propagate(const GridWavefunction& psi, double t);

}  // namespace fm
