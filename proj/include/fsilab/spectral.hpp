#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fsilab/field.hpp"

namespace fsilab {

// Direct DFT helpers for the periodic 1D plate. Grids are desk-scale
// (n <= a few hundred), so the O(n^2) transform is not worth replacing.

inline std::vector<std::complex<double>> dft(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  const double twopi = 2.0 * std::numbers::pi;
  for (int m = 0; m < n; ++m) {
    std::complex<double> s{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const double ph = -twopi * m * i / n;
      s += v[static_cast<std::size_t>(i)] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    out[static_cast<std::size_t>(m)] = s / static_cast<double>(n);
  }
  return out;
}

inline std::vector<double> idft(const std::vector<std::complex<double>>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<double> out(static_cast<std::size_t>(n));
  const double twopi = 2.0 * std::numbers::pi;
  for (int i = 0; i < n; ++i) {
    std::complex<double> s{0.0, 0.0};
    for (int m = 0; m < n; ++m) {
      const double ph = twopi * m * i / n;
      s += c[static_cast<std::size_t>(m)] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    out[static_cast<std::size_t>(i)] = s.real();
  }
  return out;
}

/// Physical wavenumber of DFT mode m on a periodic interval of length lx.
inline double mode_wavenumber(int m, int n, double lx) {
  const int ms = (m <= n / 2) ? m : m - n;
  return 2.0 * std::numbers::pi * ms / lx;
}

/// Sobolev norm ||g||_{H^s} with spectral weights (1+k^2)^{s/2} on the
/// periodic 1D plate; s may be negative.
inline double sobolev_norm_periodic(const PlateField& g, double s) {
  const Grid& grid = g.grid;
  if (!grid.periodic() || grid.ny != 0)
    throw std::invalid_argument("sobolev_norm_periodic: periodic 1D plate required");
  auto c = dft(g.values);
  const int n = grid.npx();
  double acc = 0.0;
  for (int m = 0; m < n; ++m) {
    const double k = mode_wavenumber(m, n, grid.lx);
    acc += std::pow(1.0 + k * k, s) * std::norm(c[static_cast<std::size_t>(m)]);
  }
  return std::sqrt(acc * grid.lx);
}

}  // namespace fsilab
