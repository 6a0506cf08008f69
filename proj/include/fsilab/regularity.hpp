#pragma once

#include <vector>

#include "fsilab/field.hpp"

namespace fsilab {

/// Parameters of the fractional difference quotient
///   D_h^s g(y) = (g(y + h e) - g(y)) / h^s.
struct FractionalParams {
  double s = 0.5;     // fractional order in (0, 1]
  double q_int = 2.0; // integrability exponent in (1, inf)
  double h = 0.0;     // shift, a positive multiple of the grid spacing
  int direction = 0;  // 0 = +x, 1 = +y (2D plates only)

  void validate(const Grid& g) const;
};

/// Nodewise fractional difference quotient. Periodic plates shift with
/// wraparound; clamped plates restrict to the inner band
/// Gamma_h = {dist(x, boundary) > h} and return zero outside it.
PlateField diff_quotient(const PlateField& g, const FractionalParams& p);

/// Discrete Nikolskii norm: sup over lattice directions and the given
/// shifts of ||D_h^s g||_{L^q(Gamma_h)}, plus ||g||_{L^q}.
double nikolskii_norm(const PlateField& g, double s, double q_int,
                      const std::vector<double>& h_set);

/// Discrete Gagliardo (fractional Sobolev) norm: the double-sum
/// quadrature of |g(x)-g(y)|^q / |x-y|^{n+sq} excluding the diagonal
/// cell, to the power 1/q, plus ||g||_{L^q}. Periodic plates measure
/// |x-y| as the wraparound distance.
double gagliardo_norm(const PlateField& g, double s, double q_int);

/// Absolute residual of the discrete summation-by-parts identity
///   -int f D_{-h}^s D_h^s g = int D_h^s f D_h^s g,
/// which holds exactly (up to round-off) on periodic plates.
double summation_by_parts_residual(const PlateField& f, const PlateField& g,
                                   double s, double h);

/// Supremum of the admissible fractional order s for lap w in
/// L^2(0,T; H^s), by the four-case table:
///   d=2, alpha=0: min{1/2 - 1/(2 gamma), 1/4}
///   d=2, alpha>0: min{3/4 - 1/(2 gamma), 1/2}
///   d=3, alpha=0: min{7/12 - 1/gamma, 1/4}
///   d=3, alpha>0: min{2/3 - 1/gamma, 1/2}
/// Throws when gamma is outside the admissible range of the case
/// (d=2: gamma > 1; d=3: gamma > 12/7 if alpha=0, gamma > 3/2 if alpha>0).
double threshold_s(double gamma, int d, bool alpha_positive);

/// Exact-rational version of threshold_s for rational gamma = num/den.
struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

Rational threshold_s_exact(long long gamma_num, long long gamma_den, int d,
                           bool alpha_positive);

/// Empirical h-uniformity scan of ||D_h^s lap w||^2_{L^2(Gamma_T)} over a
/// trajectory of plate displacements. For each s the scan integrates the
/// squared quotient norm in time for every shift in h_decades and reports
/// the growth ratio max_h I(h) / I(h_max): a bounded ratio across decades
/// is the finite-resolution proxy for an h-independent bound. Also tabulates
/// the quartic quantity int |D_h^{s/2} lap w|^4 used by the quasilinear model.
struct RegularityScanReport {
  std::vector<double> s_grid;
  std::vector<double> h_decades;
  std::vector<std::vector<double>> norms;    // [s][h] int_0^T ||D_h^s lap w||^2
  std::vector<std::vector<double>> quartic;  // [s][h] int_0^T int |D_h^{s/2} lap w|^4
  std::vector<double> ratio;                 // per s, max_h norms / norms at h_max
  double ratio_bound = 10.0;
  double empirical_threshold = -1.0;  // largest s whose ratio stays below bound
};

/// h_decades empty selects the default {hx, 2hx, 4hx, 8hx, 16hx}.
RegularityScanReport regularity_scan(const std::vector<PlateField>& w_trajectory,
                                     const std::vector<double>& times,
                                     const std::vector<double>& s_grid,
                                     std::vector<double> h_decades = {},
                                     double ratio_bound = 10.0);

}  // namespace fsilab
