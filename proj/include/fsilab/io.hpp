#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsilab/coupling.hpp"
#include "fsilab/diagnostics.hpp"

namespace fsilab::io {

inline constexpr int snapshot_schema_version = 1;

/// Configuration parse or validation failure; the CLI maps it to exit 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Snapshot / time-series format failure (schema mismatch, truncation).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Analytic initial-data recipe: rest (constant density, everything else
/// zero) or sine (sinusoidal plate displacement / velocity over the same
/// constant density).
struct InitialSpec {
  std::string recipe = "rest";      // rest | sine
  double density = 1.0;             // constant rho0
  double amplitude = 0.0;           // plate displacement amplitude
  double velocity_amplitude = 0.0;  // plate velocity amplitude
  int mode = 1;                     // wavenumber of the sine recipe
};

struct OutputSpec {
  std::string directory = "out";
  bool snapshots = true;  // write state snapshots at the scheme cadence
};

/// Regularity-scan knobs (scenario regularity_scan / scan subcommand).
struct ScanSpec {
  std::vector<double> s{0.25};
  double ratio_bound = 10.0;
};

struct ExperimentConfig {
  std::string scenario = "free_decay";
  int dimension = 2;  // fluid dimension of the admissibility case table
  Grid grid{32, 32, 2.0 * 3.14159265358979323846};
  FluidParams params;
  PlateModel model;
  SchemeConfig scheme;
  InitialSpec initial;
  OutputSpec output;
  ScanSpec scan;
  unsigned long seed = 0;

  void validate() const;
};

/// Flat `key = value` document; '#' starts a comment. Unknown keys are
/// rejected by name, parse errors carry the line number, and every field
/// not present keeps its documented default.
ExperimentConfig parse_config(std::istream& in, const std::string& name);
ExperimentConfig load_config(const std::string& path);

/// Canonical echo of the fully resolved configuration (defaults included);
/// itself parseable by parse_config.
std::string resolved_config(const ExperimentConfig& config);

/// Materialize the analytic initial-data recipe on the configured grid.
InitialData build_initial(const ExperimentConfig& config);

/// Energy time series: one row per stored snapshot, header exactly
/// time,kinetic,internal,plate_kinetic,bending,viscous_dissipation_cum,
/// plate_dissipation_cum,total.
void write_timeseries(std::ostream& out, const Trajectory& traj,
                      const FluidParams& params, const PlateModel& model);
void write_timeseries(const std::string& path, const Trajectory& traj,
                      const FluidParams& params, const PlateModel& model);

/// Self-describing text snapshot: header block (schema version, grid,
/// parameters), then row-major node values per field at 17 significant
/// digits. read_snapshot is the exact inverse.
void write_snapshot(std::ostream& out, const CoupledState& state,
                    const FluidParams& params, const PlateModel& model);
void write_snapshot(const std::string& path, const CoupledState& state,
                    const FluidParams& params, const PlateModel& model);
CoupledState read_snapshot(std::istream& in);
CoupledState read_snapshot(const std::string& path);

/// Bilinear resampling of a coupled state onto a finer (or equal) grid of
/// the same channel; periodic in x, linear in z.
CoupledState interpolate_to(const CoupledState& state, const Grid& fine);

/// Execute the configured scenario and write its artifact bundle (resolved
/// config, time series, snapshots, scenario-specific tables) into
/// output.directory. Errors propagate after a failure marker is flushed.
void run_scenario(const ExperimentConfig& config, bool verbose = false);

}  // namespace fsilab::io
