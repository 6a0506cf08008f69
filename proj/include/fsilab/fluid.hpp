#pragma once

#include <stdexcept>

#include "fsilab/geometry.hpp"

namespace fsilab {

/// Experiments stay in the strong-solution regime away from vacuum.
inline constexpr double r_floor = 1e-10;

struct FluidParams {
  double gamma = 2.0;
  double mu = 1.0;
  double lambda = 0.0;

  /// gamma admissibility depends on the fluid dimension d and on whether the
  /// plate is viscoelastic (alpha > 0).
  void validate(int d = 2, double alpha = 0.0) const {
    if (mu <= 0.0) throw std::invalid_argument("FluidParams: mu must be > 0");
    if (lambda + 2.0 * mu / 3.0 <= 0.0)
      throw std::invalid_argument("FluidParams: lambda + 2mu/3 must be > 0");
    if (d == 2) {
      if (gamma <= 1.0) throw std::invalid_argument("FluidParams: d=2 needs gamma > 1");
    } else if (d == 3) {
      const double lo = (alpha > 0.0) ? 3.0 / 2.0 : 12.0 / 7.0;
      if (gamma <= lo)
        throw std::invalid_argument("FluidParams: d=3 gamma below the admissible bound");
    } else {
      throw std::invalid_argument("FluidParams: d must be 2 or 3");
    }
  }
};

struct VacuumError : std::runtime_error {
  explicit VacuumError(double rmin)
      : std::runtime_error("density below floor: " + std::to_string(rmin)) {}
};

struct FluidState {
  ScalarField r;  // transformed density
  VectorField U;  // transformed velocity
};

ScalarField pressure(const ScalarField& r, const FluidParams& params);

/// S(gradU) = mu gradU + (mu+lambda) tr(gradU) I, non-symmetrized.
MatrixField stress_tensor(const MatrixField& gradU, const FluidParams& params);

/// dt_r = w_dom . grad^w r - div^w (r U), in conservative flux form:
/// upwinded face fluxes of J r times the contravariant advective velocity,
/// divided by the vertex-centered cell widths so that sum J dt_r vol plus
/// the Jacobian drift sum wt r vol telescopes to the boundary fluxes.
ScalarField continuity_rhs(const FluidState& state, const AleGeometry& geo);

/// Upwinded face fluxes of the transported density summed into a divergence:
/// the bracket of the conservative form dt(J r) + div(flux) + wt r drift.
/// Wall fluxes are evaluated at the walls themselves and vanish exactly on
/// no-slip / kinematically coupled states.
ScalarField transport_flux_divergence(const FluidState& state, const AleGeometry& geo);

/// (w_dom - U) . grad^w U, first-order upwind per reference direction.
VectorField convection_term(const FluidState& state, const AleGeometry& geo);

/// -(1/r) grad^w r^gamma, centered.
VectorField pressure_term(const FluidState& state, const AleGeometry& geo,
                          const FluidParams& params);

/// (1/r) div^w S(grad^w U), centered.
VectorField viscous_term(const FluidState& state, const AleGeometry& geo,
                         const FluidParams& params);

/// dt_U = (w_dom - U) . grad^w U - (1/r) grad^w r^gamma + (1/r) div^w S(grad^w U),
/// with upwinded convection and centered pressure/viscous terms.
VectorField momentum_rhs(const FluidState& state, const AleGeometry& geo,
                         const FluidParams& params);

/// f(x, y) = x^gamma - gamma y^(gamma-1) (x - y) - y^gamma.
double pressure_potential(double x, double y, double gamma);

struct PressureBounds {
  double c;     // min(c_f1, c_f2)
  double c_f1;  // f(x,y) >= c_f1 |x-y|^p1 on [y/2, 2y], p1 = max(2, gamma)
  double c_f2;  // f(x,y) >= c_f2 (1 + x^p2) outside [y/2, 2y], p2 = min(2, gamma)
};

/// Largest constants (up to scan resolution) for the two lower bounds of the
/// pressure potential, over y in [c_r2, C_r2]; brute-force grid scan with
/// local refinement around the minimizer. The near-diagonal bound carries the
/// exponent max(2, gamma): f vanishes quadratically at x = y, so for
/// gamma < 2 no positive constant exists with the exponent min(2, gamma).
PressureBounds pressure_potential_bounds(double c_r2, double C_r2, double gamma,
                                         int scan_n = 400);

}  // namespace fsilab
