#pragma once

#include "fsilab/field.hpp"

namespace fsilab {

// Second-order centered first-derivative stencils; wraparound on periodic
// plates, one-sided second-order at clamped plate ends and at the rigid
// bottom / interface rows of the fluid grid.

inline double plate_dx(const PlateField& f, int i, int j = 0) {
  const Grid& g = f.grid;
  const double h = g.hx();
  const int n = g.npx();
  if (g.periodic()) {
    int ip = (i + 1) % n, im = (i + n - 1) % n;
    return (f.at(ip, j) - f.at(im, j)) / (2.0 * h);
  }
  if (i == 0) return (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2.0 * h);
  if (i == n - 1)
    return (3.0 * f.at(n - 1, j) - 4.0 * f.at(n - 2, j) + f.at(n - 3, j)) / (2.0 * h);
  return (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h);
}

inline double plate_dy(const PlateField& f, int i, int j) {
  const Grid& g = f.grid;
  if (g.ny == 0) return 0.0;
  const double h = g.hy();
  const int n = g.npy();
  if (g.periodic()) {
    int jp = (j + 1) % n, jm = (j + n - 1) % n;
    return (f.at(i, jp) - f.at(i, jm)) / (2.0 * h);
  }
  if (j == 0) return (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) / (2.0 * h);
  if (j == n - 1)
    return (3.0 * f.at(i, n - 1) - 4.0 * f.at(i, n - 2) + f.at(i, n - 3)) / (2.0 * h);
  return (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * h);
}

inline double fluid_dx(const ScalarField& f, int i, int k) {
  const Grid& g = f.grid;
  const double h = g.hx();
  const int n = g.npx();
  if (g.periodic()) {
    int ip = (i + 1) % n, im = (i + n - 1) % n;
    return (f(ip, k) - f(im, k)) / (2.0 * h);
  }
  if (i == 0) return (-3.0 * f(0, k) + 4.0 * f(1, k) - f(2, k)) / (2.0 * h);
  if (i == n - 1) return (3.0 * f(n - 1, k) - 4.0 * f(n - 2, k) + f(n - 3, k)) / (2.0 * h);
  return (f(i + 1, k) - f(i - 1, k)) / (2.0 * h);
}

inline double fluid_dz(const ScalarField& f, int i, int k) {
  const Grid& g = f.grid;
  const double h = g.hz();
  if (k == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * h);
  if (k == g.nz)
    return (3.0 * f(i, g.nz) - 4.0 * f(i, g.nz - 1) + f(i, g.nz - 2)) / (2.0 * h);
  return (f(i, k + 1) - f(i, k - 1)) / (2.0 * h);
}

}  // namespace fsilab
