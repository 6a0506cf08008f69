#include "fsilab/fluid.hpp"

#include <algorithm>
#include <cmath>

#include "fsilab/parallel.hpp"
#include "fsilab/stencil.hpp"

namespace fsilab {

namespace {

double rmin(const ScalarField& r) {
  double m = 1e300;
  for (double v : r.values) m = std::min(m, v);
  return m;
}

// Contravariant vertical advective speed at a node: the reference-frame
// velocity seen by a z-face, U_z - (z+1) dX_w U_X - (z+1) wt.
double vertical_speed(const FluidState& s, const AleGeometry& geo, int i, int k) {
  const double zp1 = s.r.grid.z(k) + 1.0;
  return s.U.comp(1, i, k) - zp1 * geo.dwdx(i) * s.U.comp(0, i, k) -
         zp1 * geo.wt(i);
}

double upwind(double a, double left, double right) {
  return a >= 0.0 ? a * left : a * right;
}

}  // namespace

ScalarField pressure(const ScalarField& r, const FluidParams& params) {
  if (rmin(r) < 0.0) throw std::invalid_argument("pressure: negative density");
  ScalarField p(r.grid);
  FSILAB_OMP_FOR
  for (int n = 0; n < static_cast<int>(r.values.size()); ++n)
    p.values[static_cast<std::size_t>(n)] =
        std::pow(r.values[static_cast<std::size_t>(n)], params.gamma);
  return p;
}

MatrixField stress_tensor(const MatrixField& gradU, const FluidParams& params) {
  const Grid& g = gradU.grid;
  const int d = gradU.dim;
  MatrixField s(g, d);
  FSILAB_OMP_FOR
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      double tr = 0.0;
      for (int c = 0; c < d; ++c) tr += gradU.entry(c, c, i, k);
      for (int rr = 0; rr < d; ++rr)
        for (int cc = 0; cc < d; ++cc)
          s.entry(rr, cc, i, k) = params.mu * gradU.entry(rr, cc, i, k) +
                                  (rr == cc ? (params.mu + params.lambda) * tr : 0.0);
    }
  return s;
}

ScalarField transport_flux_divergence(const FluidState& state, const AleGeometry& geo) {
  const Grid& g = state.r.grid;
  require_same_grid(g, geo.grid(), "transport_flux_divergence");
  if (!g.periodic())
    throw std::invalid_argument("transport_flux_divergence: fluid runs need a periodic plate");

  const ScalarField& r = state.r;
  const int nx = g.npx();
  ScalarField out(g);

  FSILAB_OMP_FOR
  for (int k = 0; k <= g.nz; ++k) {
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
      // x-faces carry J r U_X; J is face-averaged, r upwinded
      auto fx = [&](int il, int ir) {
        const double a = 0.5 * (geo.jacobian(il, k) * state.U.comp(0, il, k) +
                                geo.jacobian(ir, k) * state.U.comp(0, ir, k));
        return upwind(a, r(il, k), r(ir, k));
      };
      const double div_x = (fx(i, ip) - fx(im, i)) / g.hx();

      // z-faces between node rows; boundary faces sit on the walls
      auto fz_face = [&](int kk) {  // face between kk and kk+1
        const double a = 0.5 * (vertical_speed(state, geo, i, kk) +
                                vertical_speed(state, geo, i, kk + 1));
        return upwind(a, r(i, kk), r(i, kk + 1));
      };
      double fz_lo, fz_hi;
      if (k == 0)
        fz_lo = vertical_speed(state, geo, i, 0) * r(i, 0);
      else
        fz_lo = fz_face(k - 1);
      if (k == g.nz)
        fz_hi = vertical_speed(state, geo, i, g.nz) * r(i, g.nz);
      else
        fz_hi = fz_face(k);
      const double div_z = (fz_hi - fz_lo) / g.wq_z(k);

      out(i, k) = div_x + div_z;
    }
  }
  return out;
}

ScalarField continuity_rhs(const FluidState& state, const AleGeometry& geo) {
  ScalarField out = transport_flux_divergence(state, geo);
  const Grid& g = state.r.grid;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i)
      out(i, k) = -(out(i, k) + geo.wt(i) * state.r(i, k)) / geo.jacobian(i, k);
  return out;
}

VectorField convection_term(const FluidState& state, const AleGeometry& geo) {
  const Grid& g = state.r.grid;
  require_same_grid(g, geo.grid(), "convection_term");
  const int nx = g.npx(), d = state.U.dim;
  VectorField out(g, d);
  FSILAB_OMP_FOR
  for (int k = 0; k <= g.nz; ++k) {
    for (int i = 0; i < nx; ++i) {
      // reference-frame advective velocity: b = M (w_dom - U), so that
      // (w_dom - U) . grad^w f = b_X dX_f + b_z dz_f
      const double vx = geo.ale_velocity.comp(0, i, k) - state.U.comp(0, i, k);
      const double vz = geo.ale_velocity.comp(1, i, k) - state.U.comp(1, i, k);
      const double bx = geo.inv_grad.entry(0, 0, i, k) * vx +
                        geo.inv_grad.entry(0, 1, i, k) * vz;
      const double bz = geo.inv_grad.entry(1, 0, i, k) * vx +
                        geo.inv_grad.entry(1, 1, i, k) * vz;
      const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
      for (int c = 0; c < d; ++c) {
        double conv = 0.0;
        // first-order upwind in each reference direction
        if (bx >= 0.0)
          conv += bx * (state.U.comp(c, i, k) - state.U.comp(c, im, k)) / g.hx();
        else
          conv += bx * (state.U.comp(c, ip, k) - state.U.comp(c, i, k)) / g.hx();
        if (bz >= 0.0) {
          const int kl = std::max(0, k - 1);
          conv += bz * (state.U.comp(c, i, k) - state.U.comp(c, i, kl)) / g.hz();
        } else {
          const int kh = std::min(g.nz, k + 1);
          conv += bz * (state.U.comp(c, i, kh) - state.U.comp(c, i, k)) / g.hz();
        }
        out.comp(c, i, k) = conv;
      }
    }
  }
  return out;
}

VectorField pressure_term(const FluidState& state, const AleGeometry& geo,
                          const FluidParams& params) {
  const Grid& g = state.r.grid;
  require_same_grid(g, geo.grid(), "pressure_term");
  if (rmin(state.r) < r_floor) throw VacuumError(rmin(state.r));
  ScalarField p = pressure(state.r, params);
  VectorField gradp = transformed_gradient(p, geo);
  for (int c = 0; c < gradp.dim; ++c)
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) gradp.comp(c, i, k) /= -state.r(i, k);
  return gradp;
}

VectorField viscous_term(const FluidState& state, const AleGeometry& geo,
                         const FluidParams& params) {
  const Grid& g = state.r.grid;
  require_same_grid(g, geo.grid(), "viscous_term");
  if (rmin(state.r) < r_floor) throw VacuumError(rmin(state.r));
  MatrixField S = stress_tensor(transformed_gradient(state.U, geo), params);

  // row-wise transformed divergence of the stress
  const int d = state.U.dim;
  VectorField divS(g, d);
  for (int rr = 0; rr < d; ++rr) {
    for (int cc = 0; cc < d; ++cc) {
      ScalarField comp(g);
      for (int k = 0; k <= g.nz; ++k)
        for (int i = 0; i < g.npx(); ++i) comp(i, k) = S.entry(rr, cc, i, k);
      VectorField gc = transformed_gradient(comp, geo);
      for (int k = 0; k <= g.nz; ++k)
        for (int i = 0; i < g.npx(); ++i) divS.comp(rr, i, k) += gc.comp(cc, i, k);
    }
  }
  for (int c = 0; c < d; ++c)
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) divS.comp(c, i, k) /= state.r(i, k);
  return divS;
}

VectorField momentum_rhs(const FluidState& state, const AleGeometry& geo,
                         const FluidParams& params) {
  VectorField out = convection_term(state, geo);
  VectorField pr = pressure_term(state, geo, params);
  VectorField vi = viscous_term(state, geo, params);
  for (std::size_t n = 0; n < out.values.size(); ++n)
    out.values[n] += pr.values[n] + vi.values[n];
  return out;
}

double pressure_potential(double x, double y, double gamma) {
  if (x < 0.0 || y <= 0.0)
    throw std::domain_error("pressure_potential: needs x >= 0, y > 0");
  return std::pow(x, gamma) - gamma * std::pow(y, gamma - 1.0) * (x - y) -
         std::pow(y, gamma);
}

namespace {

// Grid scan with local refinement around the running minimizer.
template <class F>
double refined_min(F f, double lo, double hi, int n, int rounds = 4) {
  double best = 1e300;
  for (int round = 0; round < rounds; ++round) {
    int arg = 0;
    for (int j = 0; j <= n; ++j) {
      const double x = lo + (hi - lo) * j / n;
      const double v = f(x);
      if (v < best) {
        best = v;
        arg = j;
      }
    }
    const double h = (hi - lo) / n;
    const double c = lo + h * arg;
    lo = std::max(lo, c - h);
    hi = std::min(hi, c + h);
  }
  return best;
}

}  // namespace

PressureBounds pressure_potential_bounds(double c_r2, double C_r2, double gamma,
                                         int scan_n) {
  if (!(c_r2 > 0.0) || C_r2 < c_r2)
    throw std::invalid_argument("pressure_potential_bounds: needs 0 < c_r2 <= C_r2");
  const double p1 = std::max(2.0, gamma);
  const double p2 = std::min(2.0, gamma);
  const double x_max = std::max(10.0 * C_r2, 10.0);

  auto c1_of_y = [&](double y) {
    auto ratio = [&](double x) {
      // the ratio extends continuously to x = y but the potential cancels
      // catastrophically there; keep a small relative window out of the scan
      if (std::abs(x - y) < 1e-5 * y) return 1e300;
      return pressure_potential(x, y, gamma) / std::pow(std::abs(x - y), p1);
    };
    return refined_min(ratio, 0.5 * y, 2.0 * y, scan_n);
  };
  auto c2_of_y = [&](double y) {
    auto ratio = [&](double x) {
      return pressure_potential(x, y, gamma) / (1.0 + std::pow(x, p2));
    };
    return std::min(refined_min(ratio, 0.0, 0.5 * y, scan_n),
                    refined_min(ratio, 2.0 * y, x_max, scan_n));
  };
  const double c1 = (C_r2 > c_r2) ? refined_min(c1_of_y, c_r2, C_r2, scan_n, 2)
                                  : c1_of_y(c_r2);
  const double c2 = (C_r2 > c_r2) ? refined_min(c2_of_y, c_r2, C_r2, scan_n, 2)
                                  : c2_of_y(c_r2);
  return {std::min(c1, c2), c1, c2};
}

}  // namespace fsilab
