#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsilab/coupling.hpp"

namespace fsilab::mms {

/// Manufactured coupled solution on the 2*pi-periodic channel:
///   w = eps sin(t) sin(X),  v = eps cos(t) sin(X),
///   r = 1 + eps cos(t) cos(X)  (z-independent),
///   U = (0, (z+1) v)  (the vertical ALE lift of the plate velocity).
/// The fluid velocity equals the domain velocity, so the convective term
/// vanishes identically and every forcing term below is in closed form.
/// All fields satisfy the wall and kinematic boundary conditions exactly.
struct Manufactured {
  Grid grid;
  FluidParams params;
  double alpha = 0.0;
  double eps = 0.05;

  Manufactured(const Grid& g, const FluidParams& p, double alpha_ = 0.0,
               double eps_ = 0.05)
      : grid(g), params(p), alpha(alpha_), eps(eps_) {
    if (!grid.periodic() || grid.ny != 0 ||
        std::abs(grid.lx - 2.0 * std::numbers::pi) > 1e-12)
      throw std::invalid_argument("Manufactured: needs a 2*pi-periodic 1D plate");
    if (!(eps > 0.0 && eps < 0.5))
      throw std::invalid_argument("Manufactured: eps must keep r and 1+w positive");
  }

  double w_at(double t, double X) const { return eps * std::sin(t) * std::sin(X); }
  double v_at(double t, double X) const { return eps * std::cos(t) * std::sin(X); }
  double r_at(double t, double X) const { return 1.0 + eps * std::cos(t) * std::cos(X); }

  PlateField w_exact(double t) const {
    PlateField f(grid);
    for (int i = 0; i < grid.npx(); ++i) f(i) = w_at(t, grid.x(i));
    return f;
  }
  PlateField v_exact(double t) const {
    PlateField f(grid);
    for (int i = 0; i < grid.npx(); ++i) f(i) = v_at(t, grid.x(i));
    return f;
  }
  ScalarField r_exact(double t) const {
    ScalarField f(grid);
    for (int k = 0; k <= grid.nz; ++k)
      for (int i = 0; i < grid.npx(); ++i) f(i, k) = r_at(t, grid.x(i));
    return f;
  }
  VectorField u_exact(double t) const {
    VectorField f(grid, 2);
    for (int k = 0; k <= grid.nz; ++k)
      for (int i = 0; i < grid.npx(); ++i)
        f.comp(1, i, k) = (grid.z(k) + 1.0) * v_at(t, grid.x(i));
    return f;
  }

  CoupledState state(double t) const {
    return {FluidState{r_exact(t), u_exact(t)},
            PlateState{w_exact(t), v_exact(t), std::nullopt}, t};
  }

  InitialData initial() const {
    InitialData d{r_exact(0.0), u_exact(0.0), w_exact(0.0), v_exact(0.0),
                  std::nullopt};
    const int N = grid.fluid_nodes();
    for (int c = 0; c < 2; ++c)
      for (int n = 0; n < N; ++n)
        d.momentum0.values[static_cast<std::size_t>(c * N + n)] *=
            d.rho0.values[static_cast<std::size_t>(n)];
    return d;
  }

  /// Analytic interface traction S_10 dx_w - S_11 + r^gamma.
  double load_at(double t, double X) const {
    const double v = v_at(t, X), w = w_at(t, X), r = r_at(t, X);
    const double J = 1.0 + w;
    const double vx = eps * std::cos(t) * std::cos(X);
    const double wx = eps * std::sin(t) * std::cos(X);
    const double g = vx - v * wx / J;
    return params.mu * g * wx - (2.0 * params.mu + params.lambda) * v / J +
           std::pow(r, params.gamma);
  }

  Forcing forcing() const {
    Forcing f;
    f.mass = [*this](double t) {
      ScalarField s(grid);
      for (int k = 0; k <= grid.nz; ++k)
        for (int i = 0; i < grid.npx(); ++i) {
          const double X = grid.x(i);
          const double rt = -eps * std::sin(t) * std::cos(X);
          s(i, k) = rt + r_at(t, X) * v_at(t, X) / (1.0 + w_at(t, X));
        }
      return s;
    };
    f.momentum = [*this](double t) {
      VectorField s(grid, 2);
      const double mu = params.mu, ml = params.mu + params.lambda;
      for (int i = 0; i < grid.npx(); ++i) {
        const double X = grid.x(i);
        const double v = v_at(t, X), w = w_at(t, X), r = r_at(t, X);
        const double J = 1.0 + w;
        const double vt = -eps * std::sin(t) * std::sin(X);
        const double vx = eps * std::cos(t) * std::cos(X);
        const double vxx = -eps * std::cos(t) * std::sin(X);
        const double wx = eps * std::sin(t) * std::cos(X);
        const double wxx = -eps * std::sin(t) * std::sin(X);
        const double rx = -eps * std::cos(t) * std::sin(X);
        const double g = vx - v * wx / J;
        const double gx =
            vxx - (vx * wx + v * wxx) / J + v * wx * wx / (J * J);
        const double sx = params.gamma * std::pow(r, params.gamma - 1.0) * rx / r -
                          ml * (vx * J - v * wx) / (J * J * r);
        const double sz_row = -mu * (gx - g * wx / J) / r;
        for (int k = 0; k <= grid.nz; ++k) {
          s.comp(0, i, k) = sx;
          s.comp(1, i, k) = (grid.z(k) + 1.0) * (vt + sz_row);
        }
      }
      return s;
    };
    f.plate = [*this](double t) {
      // dt_v + lap^2 w cancel exactly at wavenumber one
      PlateField s(grid);
      for (int i = 0; i < grid.npx(); ++i) {
        const double X = grid.x(i);
        s(i) = alpha * eps * std::cos(t) * std::sin(X) - load_at(t, X);
      }
      return s;
    };
    return f;
  }

  /// Combined discrete L2 distance of a computed state to the exact fields
  /// at the state's own time.
  double error(const CoupledState& s) const {
    const double t = s.time;
    ScalarField re = r_exact(t);
    VectorField ue = u_exact(t);
    PlateField we = w_exact(t), ve = v_exact(t);
    double acc = 0.0;
    for (int k = 0; k <= grid.nz; ++k)
      for (int i = 0; i < grid.npx(); ++i) {
        const double wq = grid.wq_x(i) * grid.wq_z(k);
        const double dr = s.fluid.r(i, k) - re(i, k);
        acc += dr * dr * wq;
        for (int c = 0; c < 2; ++c) {
          const double du = s.fluid.U.comp(c, i, k) - ue.comp(c, i, k);
          acc += du * du * wq;
        }
      }
    for (int i = 0; i < grid.npx(); ++i) {
      const double dw = s.plate.w(i) - we(i);
      const double dv = s.plate.v(i) - ve(i);
      acc += (dw * dw + dv * dv) * grid.wq_x(i);
    }
    return std::sqrt(acc);
  }
};

}  // namespace fsilab::mms
