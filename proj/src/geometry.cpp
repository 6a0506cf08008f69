#include "fsilab/geometry.hpp"

#include <cmath>

#include "fsilab/parallel.hpp"
#include "fsilab/stencil.hpp"

namespace fsilab {

namespace {

double min_gap(const PlateField& w) {
  double m = 1e300;
  for (double v : w.values) m = std::min(m, 1.0 + v);
  return m;
}

}  // namespace

std::array<double, 2> ale_map(const PlateField& w, double X, double z) {
  // Nearest-node sample of w; the mapping itself is analytic in z.
  const Grid& g = w.grid;
  int i = static_cast<int>(std::lround(X / g.hx()));
  if (g.periodic())
    i = ((i % g.npx()) + g.npx()) % g.npx();
  else
    i = std::max(0, std::min(g.npx() - 1, i));
  const double wi = w(i);
  if (1.0 + wi <= 0.0) throw CollisionError(1.0 + wi);
  return {X, (z + 1.0) * wi + z};
}

AleGeometry build_geometry(const PlateField& w, const PlateField& wt) {
  require_same_grid(w.grid, wt.grid, "build_geometry");
  const Grid& g = w.grid;
  const double gap = min_gap(w);
  if (gap <= 0.0) throw CollisionError(gap);

  AleGeometry geo;
  geo.w = w;
  geo.wt = wt;
  geo.dwdx = PlateField(g);
  geo.jacobian = ScalarField(g);
  geo.inv_grad = MatrixField(g, 2);
  geo.ale_velocity = VectorField(g, 2);

  const int n = g.npx();
  for (int i = 0; i < n; ++i) geo.dwdx(i) = plate_dx(w, i);

  FSILAB_OMP_FOR
  for (int k = 0; k <= g.nz; ++k) {
    const double zp1 = g.z(k) + 1.0;
    for (int i = 0; i < n; ++i) {
      const double J = 1.0 + w(i);
      geo.jacobian(i, k) = J;
      geo.inv_grad.entry(0, 0, i, k) = 1.0;
      geo.inv_grad.entry(0, 1, i, k) = 0.0;
      geo.inv_grad.entry(1, 0, i, k) = -zp1 / J * geo.dwdx(i);
      geo.inv_grad.entry(1, 1, i, k) = 1.0 / J;
      geo.ale_velocity.comp(0, i, k) = 0.0;
      geo.ale_velocity.comp(1, i, k) = zp1 * wt(i);
    }
  }
  return geo;
}

VectorField transformed_gradient(const ScalarField& f, const AleGeometry& geo) {
  require_same_grid(f.grid, geo.grid(), "transformed_gradient");
  const Grid& g = f.grid;
  VectorField out(g, 2);
  FSILAB_OMP_FOR
  for (int k = 0; k <= g.nz; ++k) {
    for (int i = 0; i < g.npx(); ++i) {
      const double dX = fluid_dx(f, i, k);
      const double dz = fluid_dz(f, i, k);
      // row vector (dX, dz) times the inverse-gradient matrix
      out.comp(0, i, k) = dX * geo.inv_grad.entry(0, 0, i, k) +
                          dz * geo.inv_grad.entry(1, 0, i, k);
      out.comp(1, i, k) = dX * geo.inv_grad.entry(0, 1, i, k) +
                          dz * geo.inv_grad.entry(1, 1, i, k);
    }
  }
  return out;
}

MatrixField transformed_gradient(const VectorField& f, const AleGeometry& geo) {
  require_same_grid(f.grid, geo.grid(), "transformed_gradient");
  const Grid& g = f.grid;
  MatrixField out(g, f.dim);
  for (int c = 0; c < f.dim; ++c) {
    ScalarField comp(g);
    for (int n = 0; n < g.fluid_nodes(); ++n)
      comp.values[static_cast<std::size_t>(n)] =
          f.values[static_cast<std::size_t>(c) * g.fluid_nodes() + n];
    VectorField gc = transformed_gradient(comp, geo);
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) {
        out.entry(c, 0, i, k) = gc.comp(0, i, k);
        out.entry(c, 1, i, k) = gc.comp(1, i, k);
      }
  }
  return out;
}

ScalarField transformed_divergence(const VectorField& f, const AleGeometry& geo) {
  MatrixField grad = transformed_gradient(f, geo);
  const Grid& g = f.grid;
  ScalarField out(g);
  FSILAB_OMP_FOR
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      double tr = 0.0;
      for (int c = 0; c < f.dim; ++c) tr += grad.entry(c, c, i, k);
      out(i, k) = tr;
    }
  return out;
}

VectorField extension_operator(const PlateField& f, const AleGeometry& geo) {
  require_same_grid(f.grid, geo.grid(), "extension_operator");
  const Grid& g = f.grid;
  if (min_gap(geo.w) <= 0.0) throw CollisionError(min_gap(geo.w));
  VectorField out(g, 2);
  FSILAB_OMP_FOR
  for (int k = 0; k <= g.nz; ++k) {
    const double zp1 = g.z(k) + 1.0;
    for (int i = 0; i < g.npx(); ++i) {
      out.comp(0, i, k) = 0.0;
      out.comp(1, i, k) = f(i) * zp1;  // reference-grid form of f (z+1)/(w+1) e_d
    }
  }
  return out;
}

PlateField surface_jacobian(const PlateField& w) {
  const Grid& g = w.grid;
  PlateField out(g);
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) {
      const double gx = plate_dx(w, i, j);
      const double gy = plate_dy(w, i, j);
      out.at(i, j) = std::sqrt(1.0 + gx * gx + gy * gy);
    }
  return out;
}

std::vector<PlateField> graph_normal(const PlateField& w) {
  const Grid& g = w.grid;
  const int d = (g.ny == 0) ? 2 : 3;
  std::vector<PlateField> out(static_cast<std::size_t>(d), PlateField(g));
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) {
      const double gx = plate_dx(w, i, j);
      const double gy = plate_dy(w, i, j);
      const double s = std::sqrt(1.0 + gx * gx + gy * gy);
      out[0].at(i, j) = -gx / s;
      if (d == 3) out[1].at(i, j) = -gy / s;
      out[static_cast<std::size_t>(d - 1)].at(i, j) = 1.0 / s;
    }
  return out;
}

ScalarField material_derivative_identity_residual(
    const std::vector<ScalarField>& q_snapshots,
    const std::vector<ScalarField>& qt_snapshots,
    const std::vector<AleGeometry>& geo_snapshots, double dt) {
  if (q_snapshots.size() < 3)
    throw std::invalid_argument("material_derivative_identity_residual: need >= 3 snapshots");
  if (qt_snapshots.size() != q_snapshots.size() ||
      geo_snapshots.size() != q_snapshots.size())
    throw std::invalid_argument("material_derivative_identity_residual: series length mismatch");

  const std::size_t m = q_snapshots.size() / 2;  // middle snapshot
  const ScalarField& qm = q_snapshots[m];
  const Grid& g = qm.grid;
  const AleGeometry& geo = geo_snapshots[m];
  VectorField grad = transformed_gradient(qm, geo);

  ScalarField out(g);
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      const double ddt =
          (q_snapshots[m + 1](i, k) - q_snapshots[m - 1](i, k)) / (2.0 * dt);
      const double adv = geo.ale_velocity.comp(0, i, k) * grad.comp(0, i, k) +
                         geo.ale_velocity.comp(1, i, k) * grad.comp(1, i, k);
      out(i, k) = ddt - qt_snapshots[m](i, k) - adv;
    }
  return out;
}

}  // namespace fsilab
