#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsilab {

enum class Topology { periodic, clamped };

/// Uniform grid over the reference channel Omega = Gamma x (-1, 0).
///
/// The plate Gamma is the interval (0, lx) discretized with nx cells.
/// Periodic topology stores nx plate nodes (wraparound); clamped stores
/// nx+1 nodes including both boundary nodes. The vertical direction is
/// always the interval (-1, 0) with nz cells and nz+1 node rows; row 0
/// is the rigid bottom z = -1, row nz is the interface z = 0.
///
/// An optional second plate direction (ny > 0, ly) turns the plate into
/// a rectangle; it is used by the plate-only operators (von Karman
/// bracket, Airy solve). Fluid fields require ny == 0.
struct Grid {
  int nx = 0;
  int nz = 0;
  double lx = 1.0;
  Topology plate_topology = Topology::periodic;
  int ny = 0;      // 0 => one-dimensional plate (fluid dimension d = 2)
  double ly = 1.0;

  Grid() = default;
  Grid(int nx_, int nz_, double lx_, Topology topo = Topology::periodic,
       int ny_ = 0, double ly_ = 1.0)
      : nx(nx_), nz(nz_), lx(lx_), plate_topology(topo), ny(ny_), ly(ly_) {
    if (nx < 4) throw std::invalid_argument("Grid: nx must be >= 4");
    if (ny != 0 && ny < 4) throw std::invalid_argument("Grid: ny must be 0 or >= 4");
    if (nz < 4 && nz != 0) throw std::invalid_argument("Grid: nz must be >= 4");
    if (nz == 0) nz = 4;  // plate-only grids still carry a formal vertical extent
    if (lx <= 0 || ly <= 0) throw std::invalid_argument("Grid: lengths must be positive");
  }

  bool periodic() const { return plate_topology == Topology::periodic; }
  double hx() const { return lx / nx; }
  double hy() const { return ly / (ny > 0 ? ny : 1); }
  double hz() const { return 1.0 / nz; }

  /// Plate node count along x (and y for 2D plates).
  int npx() const { return periodic() ? nx : nx + 1; }
  int npy() const { return ny == 0 ? 1 : (periodic() ? ny : ny + 1); }
  int plate_nodes() const { return npx() * npy(); }
  int fluid_rows() const { return nz + 1; }
  int fluid_nodes() const { return npx() * fluid_rows(); }

  double x(int i) const { return i * hx(); }
  double y(int j) const { return j * hy(); }
  double z(int k) const { return -1.0 + k * hz(); }

  /// Trapezoid quadrature weight of plate node i (x-direction).
  double wq_x(int i) const {
    if (periodic()) return hx();
    return (i == 0 || i == nx) ? 0.5 * hx() : hx();
  }
  double wq_y(int j) const {
    if (ny == 0) return 1.0;
    if (periodic()) return hy();
    return (j == 0 || j == ny) ? 0.5 * hy() : hy();
  }
  double wq_z(int k) const {
    return (k == 0 || k == nz) ? 0.5 * hz() : hz();
  }

  bool same_as(const Grid& o) const {
    return nx == o.nx && nz == o.nz && ny == o.ny && lx == o.lx && ly == o.ly &&
           plate_topology == o.plate_topology;
  }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!a.same_as(b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

/// Scalar samples on the plate grid Gamma.
struct PlateField {
  Grid grid;
  std::vector<double> values;

  PlateField() = default;
  explicit PlateField(const Grid& g, double fill = 0.0)
      : grid(g), values(static_cast<std::size_t>(g.plate_nodes()), fill) {}

  int size() const { return static_cast<int>(values.size()); }
  double& operator()(int i) { return values[static_cast<std::size_t>(i)]; }
  double operator()(int i) const { return values[static_cast<std::size_t>(i)]; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.npx() + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.npx() + i]; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Scalar samples on the fluid grid Omega (row-major, row = z level).
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(static_cast<std::size_t>(g.fluid_nodes()), fill) {
    if (g.ny != 0) throw std::invalid_argument("ScalarField: fluid fields need a 1D plate");
  }

  int idx(int i, int k) const { return k * grid.npx() + i; }
  double& operator()(int i, int k) { return values[static_cast<std::size_t>(idx(i, k))]; }
  double operator()(int i, int k) const { return values[static_cast<std::size_t>(idx(i, k))]; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Vector samples on the fluid grid; component-major storage.
struct VectorField {
  Grid grid;
  int dim = 2;
  std::vector<double> values;  // [comp * nodes + node]

  VectorField() = default;
  explicit VectorField(const Grid& g, int d = 2, double fill = 0.0)
      : grid(g), dim(d),
        values(static_cast<std::size_t>(d) * g.fluid_nodes(), fill) {
    if (g.ny != 0) throw std::invalid_argument("VectorField: fluid fields need a 1D plate");
  }

  int nodes() const { return grid.fluid_nodes(); }
  double& comp(int c, int i, int k) {
    return values[static_cast<std::size_t>(c) * nodes() + k * grid.npx() + i];
  }
  double comp(int c, int i, int k) const {
    return values[static_cast<std::size_t>(c) * nodes() + k * grid.npx() + i];
  }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Per-node d x d matrix samples on the fluid grid (row-major entries).
struct MatrixField {
  Grid grid;
  int dim = 2;
  std::vector<double> values;  // [(r*dim+c) * nodes + node]

  MatrixField() = default;
  explicit MatrixField(const Grid& g, int d = 2)
      : grid(g), dim(d),
        values(static_cast<std::size_t>(d) * d * g.fluid_nodes(), 0.0) {}

  int nodes() const { return grid.fluid_nodes(); }
  double& entry(int r, int c, int i, int k) {
    return values[static_cast<std::size_t>(r * dim + c) * nodes() + k * grid.npx() + i];
  }
  double entry(int r, int c, int i, int k) const {
    return values[static_cast<std::size_t>(r * dim + c) * nodes() + k * grid.npx() + i];
  }
};

// Plate quadrature: trapezoid, exact-periodic weights on periodic grids.
inline double integrate_plate(const PlateField& f) {
  const Grid& g = f.grid;
  double s = 0.0;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) s += f.at(i, j) * g.wq_x(i) * g.wq_y(j);
  return s;
}

inline double integrate_fluid(const ScalarField& f) {
  const Grid& g = f.grid;
  double s = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) s += f(i, k) * g.wq_x(i) * g.wq_z(k);
  return s;
}

inline double plate_l2(const PlateField& f) {
  const Grid& g = f.grid;
  double s = 0.0;
  for (int j = 0; j < g.npy(); ++j)
    for (int i = 0; i < g.npx(); ++i) {
      double v = f.at(i, j);
      s += v * v * g.wq_x(i) * g.wq_y(j);
    }
  return std::sqrt(s);
}

}  // namespace fsilab
