#include "freemoments/wavefunction.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

namespace fm {

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;

// Relative spectral energy allowed in the outer 1/8 of the k band.
constexpr double spectral_tail_limit = 1e-8;
// Relative weight allowed in the outer 1/16 position band of the integrand.
constexpr double position_tail_limit = 1e-8;

// std::to_string prints fixed-point, which shows tiny tail fractions as 0.
std::string diag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}
// Relative edge density at which free evolution is declared wrapped.
constexpr double edge_density_limit = 1e-10;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_spectral_grid(const GridWavefunction& psi) {
  if (!is_power_of_two(psi.size()) || psi.size() < 2)
    throw invalid_input("grid size must be a power of two (and at least 2)");
  if (!(psi.dx > 0.0) || !std::isfinite(psi.dx))
    throw invalid_input("grid spacing must be positive and finite");
  if (!(psi.mass > 0.0) || !std::isfinite(psi.mass))
    throw invalid_input("mass must be positive and finite");
  if (!(psi.hbar > 0.0) || !std::isfinite(psi.hbar))
    throw invalid_input("hbar must be positive and finite");
}

// FFTW plan creation is not thread-safe; execution is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void dft_in_place(std::vector<std::complex<double>>& a, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(a.size()),
                            reinterpret_cast<fftw_complex*>(a.data()),
                            reinterpret_cast<fftw_complex*>(a.data()), sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

// Angular wavenumber of FFT bin j on an N-point grid with spacing dx.
double wavenumber(std::size_t j, std::size_t n, double dx) {
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  auto f = static_cast<std::ptrdiff_t>(j);
  if (f >= half) f -= static_cast<std::ptrdiff_t>(n);
  return 2.0 * pi * static_cast<double>(f) / (static_cast<double>(n) * dx);
}

// Fraction of spectral energy in the outer 1/8 of the wavenumber band.
double spectral_tail_fraction(const GridWavefunction& psi) {
  std::vector<std::complex<double>> spectrum = psi.amplitudes;
  dft_in_place(spectrum, FFTW_FORWARD);
  const std::size_t n = spectrum.size();
  const auto band = static_cast<std::ptrdiff_t>((7 * n) / 16);
  long double total = 0.0L, tail = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const long double e = std::norm(spectrum[j]);
    total += e;
    auto f = static_cast<std::ptrdiff_t>(j);
    if (f >= static_cast<std::ptrdiff_t>(n / 2)) f -= static_cast<std::ptrdiff_t>(n);
    if (f >= band || f <= -band) tail += e;
  }
  if (total == 0.0L) return 0.0;
  return static_cast<double>(tail / total);
}

// Fraction of the integrand |x - x0|^j rho in the outer 1/16 bands.
double position_tail_fraction(const GridWavefunction& psi, double x0, int j) {
  const std::size_t n = psi.size();
  const std::size_t band = std::max<std::size_t>(1, n / 16);
  long double total = 0.0L, tail = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double w =
        std::pow(std::fabs(psi.x_at(i) - x0), j) * std::norm(psi.amplitudes[i]);
    total += w;
    if (i < band || i >= n - band) tail += w;
  }
  if (total == 0.0L) return 0.0;
  return static_cast<double>(tail / total);
}

}  // namespace

double GridWavefunction::norm_squared() const {
  long double acc = 0.0L;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return static_cast<double>(acc * dx);
}

GridWavefunction GridWavefunction::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw invalid_input("wavefunction norm must be positive and finite");
  GridWavefunction out = *this;
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& a : out.amplitudes) a *= scale;
  return out;
}

Centroid centroid(const GridWavefunction& psi) {
  require_spectral_grid(psi);
  const double n2 = psi.norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw invalid_input("wavefunction norm must be positive and finite");

  long double xbar = 0.0L;
  for (std::size_t i = 0; i < psi.size(); ++i)
    xbar += psi.x_at(i) * std::norm(psi.amplitudes[i]);
  xbar *= psi.dx;

  std::vector<std::complex<double>> spectrum = psi.amplitudes;
  dft_in_place(spectrum, FFTW_FORWARD);
  long double pbar = 0.0L, total = 0.0L;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const long double e = std::norm(spectrum[j]);
    pbar += psi.hbar * wavenumber(j, spectrum.size(), psi.dx) * e;
    total += e;
  }

  Centroid c;
  c.x = static_cast<double>(xbar) / n2;
  c.p = total > 0.0L ? static_cast<double>(pbar / total) : 0.0;
  return c;
}

namespace {

// Sums, over all words of n - via DP over word length - C(m, j) operator
// strings with j momentum factors, applied rightmost-first to psi:
//   row[m][j] = (X - x0) row[m-1][j] + (P - p0) row[m-1][j-1].
// Returns <psi | row[n][k]> dx / C(n, k) for every k at once.
std::vector<std::complex<double>> weyl_row(const GridWavefunction& padded,
                                           const Centroid& c, int n) {
  const std::size_t np = padded.size();
  std::vector<double> xw(np), pw(np);
  for (std::size_t i = 0; i < np; ++i) xw[i] = padded.x_at(i) - c.x;
  for (std::size_t j = 0; j < np; ++j)
    pw[j] = padded.hbar * wavenumber(j, np, padded.dx) - c.p;

  auto apply_x = [&](const std::vector<std::complex<double>>& v) {
    std::vector<std::complex<double>> out(np);
    for (std::size_t i = 0; i < np; ++i) out[i] = xw[i] * v[i];
    return out;
  };
  auto apply_p = [&](const std::vector<std::complex<double>>& v) {
    std::vector<std::complex<double>> out = v;
    dft_in_place(out, FFTW_FORWARD);
    for (std::size_t j = 0; j < np; ++j) out[j] *= pw[j];
    dft_in_place(out, FFTW_BACKWARD);
    const double inv = 1.0 / static_cast<double>(np);
    for (auto& a : out) a *= inv;
    return out;
  };

  std::vector<std::vector<std::complex<double>>> row(1, padded.amplitudes);
  for (int m = 1; m <= n; ++m) {
    std::vector<std::vector<std::complex<double>>> next(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
      std::vector<std::complex<double>> acc(np, {0.0, 0.0});
      if (j <= m - 1) acc = apply_x(row[j]);
      if (j >= 1) {
        const std::vector<std::complex<double>> pv = apply_p(row[j - 1]);
        for (std::size_t i = 0; i < np; ++i) acc[i] += pv[i];
      }
      next[j] = std::move(acc);
    }
    row = std::move(next);
  }

  std::vector<std::complex<double>> result(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    std::complex<long double> acc{0.0L, 0.0L};
    for (std::size_t i = 0; i < np; ++i) {
      const std::complex<long double> a(padded.amplitudes[i].real(),
                                        padded.amplitudes[i].imag());
      const std::complex<long double> b(row[k][i].real(), row[k][i].imag());
      acc += std::conj(a) * b;
    }
    acc *= static_cast<long double>(padded.dx) / static_cast<long double>(binomial(n, k));
    result[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return result;
}

// Normalizes, runs the health monitors (with position weight exponent jx),
// zero-pads fourfold, and returns all complex order-n components.
std::vector<std::complex<double>> measure_raw(const GridWavefunction& psi, int n, int jx) {
  require_spectral_grid(psi);
  if (n < 1 || n > 6) throw invalid_input("grid moments support orders 1 through 6");

  const GridWavefunction unit = psi.normalized();
  const Centroid c = centroid(unit);

  const double stail = spectral_tail_fraction(unit);
  if (stail > spectral_tail_limit)
    throw resolution_error("spectral tail energy " + diag(stail) + " exceeds " +
                           diag(spectral_tail_limit) +
                           "; the grid is too coarse for this state");
  const double ptail = position_tail_fraction(unit, c.x, jx);
  if (ptail > position_tail_limit)
    throw convergence_error("position tail of the weighted integrand " + diag(ptail) +
                            " exceeds " + diag(position_tail_limit) +
                            "; the moment has not converged on this grid");

  GridWavefunction padded;
  const std::size_t np = 4 * unit.size();
  const std::size_t lead = (np - unit.size()) / 2;
  padded.amplitudes.assign(np, {0.0, 0.0});
  std::copy(unit.amplitudes.begin(), unit.amplitudes.end(),
            padded.amplitudes.begin() + static_cast<std::ptrdiff_t>(lead));
  padded.x_min = unit.x_min - static_cast<double>(lead) * unit.dx;
  padded.dx = unit.dx;
  padded.hbar = unit.hbar;
  padded.mass = unit.mass;

  return weyl_row(padded, c, n);
}

}  // namespace

std::complex<double> symmetrized_moment_raw(const GridWavefunction& psi, int k, int n) {
  if (k < 0 || k > n) throw invalid_input("component index must satisfy 0 <= k <= n");
  return measure_raw(psi, n, n - k)[k];
}

double symmetrized_moment(const GridWavefunction& psi, int k, int n) {
  return symmetrized_moment_raw(psi, k, n).real();
}

MomentVector measure_moments(const GridWavefunction& psi, int n) {
  const std::vector<std::complex<double>> raw = measure_raw(psi, n, n);
  std::vector<double> values(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) values[i] = raw[i].real();
  return MomentVector(n, std::move(values), psi.mass, psi.hbar);
}

std::vector<double> position_moments(const GridWavefunction& psi, int jmax) {
  require_spectral_grid(psi);
  if (jmax < 0) throw invalid_input("moment order must be non-negative");
  const GridWavefunction unit = psi.normalized();

  long double xbar = 0.0L;
  for (std::size_t i = 0; i < unit.size(); ++i)
    xbar += unit.x_at(i) * std::norm(unit.amplitudes[i]);
  xbar *= unit.dx;

  std::vector<double> out(static_cast<std::size_t>(jmax) + 1);
  for (int j = 0; j <= jmax; ++j) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < unit.size(); ++i)
      acc += std::pow(unit.x_at(i) - static_cast<double>(xbar), j) *
             std::norm(unit.amplitudes[i]);
    out[j] = static_cast<double>(acc * unit.dx);
  }
  return out;
}

GridWavefunction free_propagate(const GridWavefunction& psi, double t) {
  require_spectral_grid(psi);
  if (!std::isfinite(t)) throw invalid_input("evolution time must be finite");

  GridWavefunction out = psi;
  dft_in_place(out.amplitudes, FFTW_FORWARD);
  const std::size_t n = out.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double k = wavenumber(j, n, out.dx);
    const double phase = -out.hbar * k * k * t / (2.0 * out.mass);
    out.amplitudes[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  dft_in_place(out.amplitudes, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& a : out.amplitudes) a *= inv;

  double peak = 0.0;
  for (const auto& a : out.amplitudes) peak = std::max(peak, std::norm(a));
  const std::size_t edge = std::min<std::size_t>(2, n / 2);
  double rim = 0.0;
  for (std::size_t i = 0; i < edge; ++i)
    rim = std::max({rim, std::norm(out.amplitudes[i]), std::norm(out.amplitudes[n - 1 - i])});
  if (peak > 0.0 && rim > edge_density_limit * peak)
    throw boundary_overflow("evolved density at the grid edge is " + diag(rim / peak) +
                            " of the peak; the packet has reached the boundary");
  return out;
}

}  // namespace fm
