#pragma once

#include <vector>

#include "fsilab/coupling.hpp"

namespace fsilab {

/// All scalar terms of the coupled energy balance; the cumulative
/// dissipation inputs are carried through so that `total` is the quantity
/// the energy inequality bounds by its initial value.
struct EnergyReport {
  double kinetic = 0.0;        // 1/2 int J r |U|^2
  double internal = 0.0;       // 1/(gamma-1) int J r^gamma
  double plate_kinetic = 0.0;  // 1/2 int v^2
  double bending = 0.0;        // 1/2 int (lap w)^2
  double potential = 0.0;      // plate potential Pi(w), nonlinear models
  double thermal = 0.0;        // 1/2 int theta^2, thermoelastic models
  double viscous_dissipation_cum = 0.0;
  double plate_dissipation_cum = 0.0;
  double total = 0.0;  // state terms + cumulative dissipation
};

EnergyReport energy(const CoupledState& state, const FluidParams& params,
                    const PlateModel& model, double viscous_dissipation_cum = 0.0,
                    double plate_dissipation_cum = 0.0);

/// Per-snapshot evaluation of total(t) - total(0) over a trajectory.
struct EnergyBudget {
  std::vector<EnergyReport> reports;
  std::vector<double> gap;  // positive values above tolerance violate Eq. (energy)
  double tolerance = 0.0;
  int violations = 0;
  bool passed() const { return violations == 0; }
};

/// tolerance < 0 selects the default 1e-6 * (1 + E(0)).
EnergyBudget energy_budget(const Trajectory& traj, const FluidParams& params,
                           const PlateModel& model, double tolerance = -1.0);

/// Relative entropy on the fixed reference domain, J = 1 + w1.
struct EntropyReport {
  double fluid_kinetic_gap = 0.0;  // 1/2 int J r1 |U1-U2|^2
  double pressure_gap = 0.0;       // 1/(gamma-1) int J f(r1, r2)
  double plate_velocity_gap = 0.0;
  double bending_gap = 0.0;
  double thermal_gap = 0.0;      // thermoelastic models
  double quasilinear_gap = 0.0;  // int [(lap w1)^3-(lap w2)^3](lap w1-lap w2)
  double total = 0.0;
};

EntropyReport relative_entropy(const CoupledState& s1, const CoupledState& s2,
                               const FluidParams& params, const PlateModel& model);

/// Verification of the density-distance bound: the discrete L^(2 and gamma)
/// distance of the densities against a fully derived multiple of the
/// relative entropy, assembled from the two pressure-potential constants
/// region by region ({r1 <= r2/2}, [r2/2, 2 r2], {r1 >= 2 r2}).
struct DensityDistanceReport {
  double lhs = 0.0;    // ||r1 - r2||^2 in L^min(2,gamma)
  double bound = 0.0;  // 3^(2/p-1) (B1 + B2 + B3)
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  PressureBounds constants{};
  bool passed = false;
};

DensityDistanceReport density_distance_check(const CoupledState& s1,
                                             const CoupledState& s2,
                                             const FluidParams& params,
                                             double c_r2, double C_r2);

/// Signed residual series of the relative energy inequality: for each
/// synchronized snapshot time,
///   [E(t) + dissipation gaps(t)] - E(0) - int_0^t R,
/// with the remainder R quadratured term by term and the strong-trajectory
/// time derivatives taken by centered differences. Nonpositive values (up
/// to tolerance) mean the inequality holds.
std::vector<double> relative_energy_residual(const Trajectory& weak,
                                             const Trajectory& strong,
                                             const FluidParams& params,
                                             const PlateModel& model);

/// Integrated Gronwall verification: E(t) <= E(0) exp(C int_0^t h) + tol.
struct GronwallReport {
  bool passed = true;
  double worst_excess = 0.0;  // max over t of E(t) - bound(t)
};

GronwallReport gronwall_check(const std::vector<double>& times,
                              const std::vector<double>& E_series,
                              const std::vector<double>& h_series, double C,
                              double tolerance = 1e-10);

}  // namespace fsilab
