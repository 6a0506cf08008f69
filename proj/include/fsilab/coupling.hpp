#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsilab/fluid.hpp"
#include "fsilab/geometry.hpp"
#include "fsilab/plate.hpp"

namespace fsilab {

/// The simulator's unit of evolution: transformed fluid state on the fixed
/// channel, plate state on its reference interval, and the current time.
struct CoupledState {
  FluidState fluid;
  PlateState plate;
  double time = 0.0;

  const Grid& grid() const { return fluid.r.grid; }
};

struct SchemeConfig {
  double dt = 1e-3;
  double t_end = 0.1;
  double collision_eps = 0.05;  // abort when min(1 + w) drops to this gap
  double cfl_safety = 0.4;      // advective dt cap: cfl_safety * hx / max|U|
  int output_every = 1;         // snapshot cadence in accepted steps

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SchemeConfig: dt must be > 0");
    if (t_end < 0.0) throw std::invalid_argument("SchemeConfig: t_end must be >= 0");
    if (!(collision_eps > 0.0 && collision_eps < 1.0))
      throw std::invalid_argument("SchemeConfig: collision_eps must be in (0,1)");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
      throw std::invalid_argument("SchemeConfig: cfl_safety must be in (0,1]");
    if (output_every < 1)
      throw std::invalid_argument("SchemeConfig: output_every must be >= 1");
  }
};

/// Initial data (rho0, (rho u)0, w0, v0); the velocity is derived, not given.
struct InitialData {
  ScalarField rho0;
  VectorField momentum0;
  PlateField w0;
  PlateField v0;
  std::optional<PlateField> theta0;  // thermoelastic models only
};

/// One named compatibility condition violated by the initial data.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& condition)
      : std::runtime_error("initial data rejected: " + condition) {}
};

/// Linear-solver breakdown inside a time step.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Optional source terms added to the transformed equations: mass(t) to
/// dt_r, momentum(t) to dt_U, plate(t) to the plate acceleration equation.
/// Null members mean zero.
struct Forcing {
  std::function<ScalarField(double)> mass;
  std::function<VectorField(double)> momentum;
  std::function<PlateField(double)> plate;
};

/// Dissipation spent during one step, measured at the post-step state
/// (dt-weighted); the plate part includes the heat-flux dissipation of the
/// thermoelastic models.
struct StepStats {
  double viscous_dissipation = 0.0;
  double plate_dissipation = 0.0;
};

/// Snapshots at the configured cadence plus the cumulative dissipation
/// totals at each stored state. The first entry is the initial state.
struct Trajectory {
  std::vector<CoupledState> states;
  std::vector<double> viscous_dissipation_cum;
  std::vector<double> plate_dissipation_cum;
};

/// Checks the four compatibility conditions nodewise and derives
/// U0 = momentum0 / rho0 (zero where the momentum vanishes).
CoupledState validate_initial_data(const InitialData& data);

/// One semi-implicit step: backward-Euler plate solve (spectral, periodic)
/// with explicit nonlinear force and fluid load, conservative upwind
/// transport against the half-updated geometry, explicit convection and
/// pressure, implicit viscous solve with the kinematic coupling enforced as
/// Dirichlet rows, then the thermoelastic heat update where applicable.
CoupledState step(const CoupledState& state, const SchemeConfig& config,
                  const FluidParams& params, const PlateModel& model,
                  const Forcing& forcing = {}, StepStats* stats = nullptr);

/// Repeated step with per-step advective CFL re-evaluation; stops at t_end,
/// propagates collision / solver errors.
Trajectory run(const InitialData& data, const SchemeConfig& config,
               const FluidParams& params, const PlateModel& model,
               const Forcing& forcing = {});

/// Transverse fluid traction on the plate, evaluated at the interface row
/// with one-sided transformed gradients:
///   load = S_10 dx_w - S_11 + r^gamma,
/// the e_d component of -S^w [(S(grad^w U) - r^gamma I) nu^w] with the
/// surface Jacobian absorbed by S^w nu^w = (-dx_w, 1).
PlateField fluid_load(const CoupledState& state, const AleGeometry& geo,
                      const FluidParams& params);

/// Residual of the coupled weak momentum identity over a stored trajectory
/// against a reference-domain test pair (q, psi) sampled at the snapshot
/// times: interior terms minus the endpoint pairings. The pair must be
/// admissible: q = 0 on the rigid wall, q = psi e_d on the interface.
double weak_momentum_residual(const Trajectory& traj,
                              const std::vector<VectorField>& q,
                              const std::vector<PlateField>& psi,
                              const FluidParams& params, const PlateModel& model);

}  // namespace fsilab
