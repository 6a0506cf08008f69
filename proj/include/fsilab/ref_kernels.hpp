#pragma once

// Plain serial reference implementations of the OpenMP-parallel hot kernels.
// They are written as straight loops from the operator definitions (no shared
// helpers beyond the stencils) and must agree with the parallel kernels to
// round-off; the tests compare them nodewise and tools/bench_kernels times
// them against each other.

#include <algorithm>

#include "fsilab/fluid.hpp"
#include "fsilab/geometry.hpp"
#include "fsilab/plate.hpp"
#include "fsilab/stencil.hpp"

namespace fsilab::ref {

/// grad^w f = (dX f - (z+1) w' / (1+w) dz f,  dz f / (1+w)).
inline VectorField transformed_gradient(const ScalarField& f,
                                        const AleGeometry& geo) {
  const Grid& g = f.grid;
  VectorField out(g, 2);
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      const double J = 1.0 + geo.w(i);
      const double dX = fluid_dx(f, i, k);
      const double dz = fluid_dz(f, i, k);
      out.comp(0, i, k) = dX - (g.z(k) + 1.0) * geo.dwdx(i) / J * dz;
      out.comp(1, i, k) = dz / J;
    }
  return out;
}

/// div^w f = sum_c (grad^w f_c)_c, component by component.
inline ScalarField transformed_divergence(const VectorField& f,
                                          const AleGeometry& geo) {
  const Grid& g = f.grid;
  ScalarField out(g);
  for (int c = 0; c < f.dim; ++c) {
    ScalarField fc(g);
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) fc(i, k) = f.comp(c, i, k);
    VectorField grad = ref::transformed_gradient(fc, geo);
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) out(i, k) += grad.comp(c, i, k);
  }
  return out;
}

/// (w_dom - U) . grad^w U with first-order upwinding per reference direction.
inline VectorField convection_term(const FluidState& state,
                                   const AleGeometry& geo) {
  const Grid& g = state.r.grid;
  const int nx = g.npx();
  VectorField out(g, state.U.dim);
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < nx; ++i) {
      const double zp1 = g.z(k) + 1.0;
      const double J = 1.0 + geo.w(i);
      const double vx = geo.ale_velocity.comp(0, i, k) - state.U.comp(0, i, k);
      const double vz = geo.ale_velocity.comp(1, i, k) - state.U.comp(1, i, k);
      const double bx = vx;
      const double bz = -zp1 * geo.dwdx(i) / J * vx + vz / J;
      const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
      const int kl = std::max(0, k - 1), kh = std::min(g.nz, k + 1);
      for (int c = 0; c < state.U.dim; ++c) {
        double conv = bx >= 0.0
                          ? bx * (state.U.comp(c, i, k) - state.U.comp(c, im, k)) / g.hx()
                          : bx * (state.U.comp(c, ip, k) - state.U.comp(c, i, k)) / g.hx();
        conv += bz >= 0.0
                    ? bz * (state.U.comp(c, i, k) - state.U.comp(c, i, kl)) / g.hz()
                    : bz * (state.U.comp(c, i, kh) - state.U.comp(c, i, k)) / g.hz();
        out.comp(c, i, k) = conv;
      }
    }
  return out;
}

/// 3-point Laplacian with wraparound (periodic) or even-reflection ghosts.
inline PlateField laplacian(const PlateField& w) {
  const Grid& g = w.grid;
  auto ext = [](int i, int n, bool periodic) {
    if (periodic) return ((i % n) + n) % n;
    while (i < 0 || i > n - 1) {
      if (i < 0) i = -i;
      if (i > n - 1) i = 2 * (n - 1) - i;
    }
    return i;
  };
  PlateField out(g);
  const double hx2 = g.hx() * g.hx(), hy2 = g.hy() * g.hy();
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) {
      double v = (w.at(ext(i - 1, g.npx(), g.periodic()), j) - 2.0 * w.at(i, j) +
                  w.at(ext(i + 1, g.npx(), g.periodic()), j)) /
                 hx2;
      if (g.ny != 0)
        v += (w.at(i, ext(j - 1, g.npy(), g.periodic())) - 2.0 * w.at(i, j) +
              w.at(i, ext(j + 1, g.npy(), g.periodic()))) /
             hy2;
      out.at(i, j) = v;
    }
  return out;
}

}  // namespace fsilab::ref
