#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "fsilab/field.hpp"

namespace fsilab {

/// Thrown when the plate touches the channel bottom: min(1 + w) <= 0.
struct CollisionError : std::runtime_error {
  explicit CollisionError(double min_gap)
      : std::runtime_error("plate collision: min(1+w) = " + std::to_string(min_gap)),
        min_gap(min_gap) {}
  double min_gap;
};

/// Geometry of the channel deformation (X, z) -> (X, (z+1) w(X) + z):
/// Jacobian J = 1 + w (constant in z), the inverse-gradient matrix of the
/// mapping evaluated on the reference grid, and the domain velocity
/// (z+1) dt_w e_d.
struct AleGeometry {
  PlateField w;               // displacement
  PlateField wt;              // plate velocity (drives the domain velocity)
  PlateField dwdx;            // plate gradient of w (module stencil)
  ScalarField jacobian;       // J = 1 + w, extended constantly in z
  MatrixField inv_grad;       // rows of the inverse mapping gradient
  VectorField ale_velocity;   // (z+1) wt e_d

  const Grid& grid() const { return w.grid; }
};

/// Physical image of the reference point (X, z) under the channel mapping.
std::array<double, 2> ale_map(const PlateField& w, double X, double z);

AleGeometry build_geometry(const PlateField& w, const PlateField& wt);

/// Gradient in deformed coordinates of a scalar sampled on the fixed grid:
/// centered stencils composed with the inverse mapping gradient.
VectorField transformed_gradient(const ScalarField& f, const AleGeometry& geo);

/// Per-component transformed gradient of a vector field; entry (r, c) is
/// the c-th transformed derivative of component r.
MatrixField transformed_gradient(const VectorField& f, const AleGeometry& geo);

ScalarField transformed_divergence(const VectorField& f, const AleGeometry& geo);

/// Lifts a plate function into the channel as the vertical field whose
/// physical-domain form is f(X)(z+1)/(w+1) e_d; on the reference grid this
/// is f(X)(z+1) e_d, and its transformed divergence is f/(w+1) exactly.
VectorField extension_operator(const PlateField& f, const AleGeometry& geo);

/// sqrt(1 + |grad w|^2), the area element of the plate graph.
PlateField surface_jacobian(const PlateField& w);

/// Outward unit normal (-grad w, 1)/sqrt(1+|grad w|^2) on the graph,
/// stored as d plate fields (components).
std::vector<PlateField> graph_normal(const PlateField& w);

/// Residual of d/dt(q o A) = (dt_q) o A + w_dom . grad^w (q o A), using a
/// centered time difference of the pulled-back snapshots. The Eulerian time
/// derivative must be supplied (pulled back) at the middle time; the
/// residual is a pure verification diagnostic.
ScalarField material_derivative_identity_residual(
    const std::vector<ScalarField>& q_snapshots,
    const std::vector<ScalarField>& qt_snapshots,
    const std::vector<AleGeometry>& geo_snapshots, double dt);

}  // namespace fsilab
