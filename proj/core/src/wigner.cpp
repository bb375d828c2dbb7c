#include "freemoments/wigner.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace fm {

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double spectral_tail_limit = 1e-8;
constexpr double boundary_weight_limit = 1e-8;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void require_grid(const WignerGrid& w) {
  if (w.nx == 0 || w.np == 0 || w.values.size() != w.nx * w.np)
    throw invalid_input("Wigner grid dimensions do not match its storage");
  if (!(w.dx > 0.0) || !(w.dp > 0.0))
    throw invalid_input("Wigner grid spacings must be positive");
}

}  // namespace

WignerGrid wigner_transform(const GridWavefunction& psi) {
  if (!is_power_of_two(psi.size()) || psi.size() < 2)
    throw invalid_input("grid size must be a power of two (and at least 2)");
  if (!(psi.dx > 0.0) || !std::isfinite(psi.dx))
    throw invalid_input("grid spacing must be positive and finite");
  if (!(psi.hbar > 0.0) || !std::isfinite(psi.hbar))
    throw invalid_input("hbar must be positive and finite");

  const GridWavefunction unit = psi.normalized();
  const std::size_t n = unit.size();

  // The p band is half the spectral band, so demand that the state's
  // momentum content clears the outer 1/8 of that half band.
  {
    std::vector<std::complex<double>> spectrum = unit.amplitudes;
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      plan = fftw_plan_dft_1d(static_cast<int>(n),
                              reinterpret_cast<fftw_complex*>(spectrum.data()),
                              reinterpret_cast<fftw_complex*>(spectrum.data()),
                              FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fftw_destroy_plan(plan);
    }
    const auto band = static_cast<std::ptrdiff_t>((7 * n) / 32);
    long double total = 0.0L, tail = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const long double e = std::norm(spectrum[j]);
      total += e;
      auto f = static_cast<std::ptrdiff_t>(j);
      if (f >= static_cast<std::ptrdiff_t>(n / 2)) f -= static_cast<std::ptrdiff_t>(n);
      if (f >= band || f <= -band) tail += e;
    }
    if (total > 0.0L && static_cast<double>(tail / total) > spectral_tail_limit)
      throw resolution_error(
          "momentum content reaches the Wigner half-band edge; refine the grid");
  }

  WignerGrid w;
  w.nx = n;
  w.np = n;
  w.x_min = unit.x_min;
  w.dx = unit.dx;
  w.dp = pi * unit.hbar / (static_cast<double>(n) * unit.dx);
  w.p_min = -static_cast<double>(n / 2) * w.dp;
  w.hbar = unit.hbar;
  w.values.assign(n * n, 0.0);

  // One plan reused across rows; the exponent sign (+2 pi i j k / N) matches
  // the kernel exp(2 i p s / hbar) with p_k = pi hbar k / (N dx).
  std::vector<std::complex<double>> g(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n),
                            reinterpret_cast<fftw_complex*>(g.data()),
                            reinterpret_cast<fftw_complex*>(g.data()),
                            FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  const double scale = unit.dx / (pi * unit.hbar);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    for (std::size_t j = 0; j < n; ++j) {
      // Signed correlation offset. The grid is a window onto free space, not
      // a period: points past the edge contribute nothing. (A periodic wrap
      // would correlate the packet with itself across the boundary and plant
      // an alternating-sign ghost of the peak at the antipodal x.)
      auto js = static_cast<std::ptrdiff_t>(j);
      if (js >= sn / 2) js -= sn;
      const std::ptrdiff_t plus = si + js;
      const std::ptrdiff_t minus = si - js;
      if (plus < 0 || plus >= sn || minus < 0 || minus >= sn)
        g[j] = 0.0;
      else
        g[j] = std::conj(unit.amplitudes[static_cast<std::size_t>(plus)]) *
               unit.amplitudes[static_cast<std::size_t>(minus)];
    }
    fftw_execute(plan);
    for (std::size_t ip = 0; ip < n; ++ip) {
      const std::size_t k = (ip + n - n / 2) % n;  // bin of p_at(ip)
      w.values[i * n + ip] = scale * g[k].real();
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return w;
}

double wigner_total(const WignerGrid& w) {
  require_grid(w);
  long double acc = 0.0L;
  for (double v : w.values) acc += v;
  return static_cast<double>(acc) * w.dx * w.dp;
}

std::vector<double> wigner_marginal_x(const WignerGrid& w) {
  require_grid(w);
  std::vector<double> out(w.nx);
  for (std::size_t i = 0; i < w.nx; ++i) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < w.np; ++k) acc += w.at(i, k);
    out[i] = static_cast<double>(acc) * w.dp;
  }
  return out;
}

std::vector<double> wigner_marginal_p(const WignerGrid& w) {
  require_grid(w);
  std::vector<double> out(w.np);
  for (std::size_t k = 0; k < w.np; ++k) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < w.nx; ++i) acc += w.at(i, k);
    out[k] = static_cast<double>(acc) * w.dx;
  }
  return out;
}

Centroid wigner_centroid(const WignerGrid& w) {
  require_grid(w);
  long double total = 0.0L, xbar = 0.0L, pbar = 0.0L;
  for (std::size_t i = 0; i < w.nx; ++i)
    for (std::size_t k = 0; k < w.np; ++k) {
      const long double v = w.at(i, k);
      total += v;
      xbar += v * w.x_at(i);
      pbar += v * w.p_at(k);
    }
  if (total == 0.0L) throw invalid_input("Wigner grid integrates to zero");
  Centroid c;
  c.x = static_cast<double>(xbar / total);
  c.p = static_cast<double>(pbar / total);
  return c;
}

double wigner_moment(const WignerGrid& w, int k, int n) {
  require_grid(w);
  if (n < 1 || n > 6) throw invalid_input("phase-space moments support orders 1 through 6");
  if (k < 0 || k > n) throw invalid_input("component index must satisfy 0 <= k <= n");

  const Centroid c = wigner_centroid(w);
  const std::size_t bx = std::max<std::size_t>(1, w.nx / 16);
  const std::size_t bp = std::max<std::size_t>(1, w.np / 16);

  long double total = 0.0L, num = 0.0L, weight = 0.0L, rim = 0.0L;
  for (std::size_t i = 0; i < w.nx; ++i) {
    const double xw = std::pow(w.x_at(i) - c.x, n - k);
    for (std::size_t j = 0; j < w.np; ++j) {
      const double v = w.at(i, j);
      const double pw = std::pow(w.p_at(j) - c.p, k);
      total += v;
      num += v * xw * pw;
      const double mag = std::fabs(v * xw * pw);
      weight += mag;
      if (i < bx || i >= w.nx - bx || j < bp || j >= w.np - bp) rim += mag;
    }
  }
  if (total == 0.0L) throw invalid_input("Wigner grid integrates to zero");
  if (weight > 0.0L && static_cast<double>(rim / weight) > boundary_weight_limit)
    throw convergence_error(
        "phase-space integrand carries weight at the grid boundary; the moment "
        "has not converged");
  return static_cast<double>(num / total);
}

}  // namespace fm
