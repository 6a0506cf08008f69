#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fsilab/field.hpp"

namespace fsilab {

enum class PlateKind {
  linear,
  kirchhoff,
  von_karman,
  berger,
  thermo_semilinear,
  thermo_quasilinear
};

/// Plate model selector plus its coefficients. Kirchhoff parameter names
/// carry _k / _exp suffixes to keep them apart from the fluid viscosities
/// and the adiabatic exponent.
struct PlateModel {
  PlateKind kind = PlateKind::linear;
  double alpha = 0.0;  // viscoelastic coefficient, >= 0

  // kirchhoff
  double nu_k = 0.0;
  double q_exp = 2.0;
  double r_exp = 0.0;
  double mu_k = 0.0;
  std::function<double(double)> f = [](double s) { return s * s * s; };
  std::function<double(double)> f_antiderivative = [](double s) {
    return 0.25 * s * s * s * s;
  };

  // berger
  double nu_b = 1.0;
  double G = 0.0;

  // von_karman
  std::optional<PlateField> F0;

  // shared transverse load h (kirchhoff / berger / von_karman)
  std::optional<PlateField> h;

  void validate() const {
    if (alpha < 0.0) throw std::invalid_argument("PlateModel: alpha must be >= 0");
    if (kind == PlateKind::kirchhoff && !(q_exp > r_exp && r_exp >= 0.0))
      throw std::invalid_argument("PlateModel: kirchhoff needs q_exp > r_exp >= 0");
    if (kind == PlateKind::berger && !(nu_b > 0.0))
      throw std::invalid_argument("PlateModel: berger needs nu_b > 0");
  }
};

struct PlateState {
  PlateField w;
  PlateField v;
  std::optional<PlateField> theta;
};

/// Discrete Laplacian: 3-point per direction; wraparound on periodic grids,
/// even-reflection ghosts on clamped grids (matching w = dn_w = 0).
PlateField laplacian(const PlateField& w);

PlateField bilaplacian(const PlateField& w);

/// Sum over grid faces of the squared forward-difference gradient; the
/// discrete Dirichlet energy paired exactly with the 3-point Laplacian.
double dirichlet_energy(const PlateField& w);

PlateField nonlinear_force(const PlateModel& model, const PlateField& w);

PlateField vk_bracket(const PlateField& w, const PlateField& u);

/// Airy stress: solves the clamped biharmonic problem lap^2 v = -[w,w]
/// with the same discrete bilaplacian, by sparse direct factorization.
PlateField airy_stress(const PlateField& w);

double potential(const PlateModel& model, const PlateField& w);

PlateField quasilinear_force(const PlateField& w);

PlateField heat_rhs(const PlateState& state, const PlateField& wt);

struct A3Report {
  int violations = 0;
  double worst_value = 0.0;  // most negative kappa||lap w||^2 + Pi + C*
  std::vector<int> violating_samples;
  bool passed() const { return violations == 0; }
};

A3Report check_A3(const PlateModel& model, double kappa, double c_star,
                  const std::vector<PlateField>& samples);

struct LipschitzReport {
  double max_ratio = 0.0;
  int pairs_used = 0;
  int pairs_excluded = 0;  // identical members
};

/// Empirical local Lipschitz constant ||F(w1)-F(w2)||_{H^-a} / ||w1-w2||_{H^2}
/// over sample pairs bounded by R in the discrete H^2 norm (periodic plates;
/// negative norms are spectral).
LipschitzReport lipschitz_probe_A1_A2(const PlateModel& model, double a, double R,
                                      const std::vector<std::pair<PlateField, PlateField>>& pairs);

}  // namespace fsilab
