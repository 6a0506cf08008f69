#include "fsilab/diagnostics.hpp"

#include <cmath>
#include <array>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fsilab/stencil.hpp"

namespace fsilab {

namespace {

double pot_f(double x, double y, double gamma) {
  // inline pressure potential; pow(0, gamma-1) = 0 keeps the y -> 0 limit
  return std::pow(x, gamma) - gamma * std::pow(y, gamma - 1.0) * (x - y) -
         std::pow(y, gamma);
}

double plate_quad(const PlateField& f) { return integrate_plate(f); }

double plate_potential(const PlateModel& model, const PlateField& w) {
  switch (model.kind) {
    case PlateKind::berger:
    case PlateKind::kirchhoff:
      return potential(model, w);
    case PlateKind::thermo_quasilinear: {
      PlateField lw = laplacian(w);
      double acc = 0.0;
      for (int i = 0; i < lw.size(); ++i)
        acc += 0.25 * std::pow(lw(i), 4) * w.grid.wq_x(i % w.grid.npx());
      return acc;
    }
    default:
      return 0.0;  // linear / semilinear-with-zero-force / von Karman plate
  }
}

double dissipation_gap_rate(const CoupledState& s1, const CoupledState& s2,
                            const FluidParams& params, const PlateModel& model) {
  const Grid& g = s1.grid();
  AleGeometry geo1 = build_geometry(s1.plate.w, s1.plate.v);
  MatrixField g1 = transformed_gradient(s1.fluid.U, geo1);
  MatrixField g2 = transformed_gradient(s2.fluid.U, geo1);
  double acc = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      double sq = 0.0, tr = 0.0;
      for (int r = 0; r < 2; ++r) {
        tr += g1.entry(r, r, i, k) - g2.entry(r, r, i, k);
        for (int c = 0; c < 2; ++c) {
          const double d = g1.entry(r, c, i, k) - g2.entry(r, c, i, k);
          sq += d * d;
        }
      }
      acc += (params.mu * sq + (params.mu + params.lambda) * tr * tr) *
             geo1.jacobian(i, k) * g.wq_x(i) * g.wq_z(k);
    }
  for (int i = 0; i < g.npx(); ++i) {
    const double dv = plate_dx(s1.plate.v, i) - plate_dx(s2.plate.v, i);
    acc += model.alpha * dv * dv * g.wq_x(i);
  }
  if (s1.plate.theta || s2.plate.theta) {
    PlateField t1 = s1.plate.theta ? *s1.plate.theta : PlateField(g);
    PlateField t2 = s2.plate.theta ? *s2.plate.theta : PlateField(g);
    for (int i = 0; i < g.npx(); ++i) {
      const double dth = plate_dx(t1, i) - plate_dx(t2, i);
      acc += dth * dth * g.wq_x(i);
    }
  }
  return acc;
}

}  // namespace

EnergyReport energy(const CoupledState& state, const FluidParams& params,
                    const PlateModel& model, double viscous_dissipation_cum,
                    double plate_dissipation_cum) {
  const Grid& g = state.grid();
  EnergyReport rep;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      const double J = 1.0 + state.plate.w(i);
      const double r = state.fluid.r(i, k);
      const double wq = g.wq_x(i) * g.wq_z(k);
      double u2 = 0.0;
      for (int c = 0; c < 2; ++c) {
        const double u = state.fluid.U.comp(c, i, k);
        u2 += u * u;
      }
      rep.kinetic += 0.5 * J * r * u2 * wq;
      rep.internal += J * std::pow(r, params.gamma) / (params.gamma - 1.0) * wq;
    }
  PlateField lw = laplacian(state.plate.w);
  for (int i = 0; i < g.npx(); ++i) {
    rep.plate_kinetic += 0.5 * state.plate.v(i) * state.plate.v(i) * g.wq_x(i);
    rep.bending += 0.5 * lw(i) * lw(i) * g.wq_x(i);
  }
  rep.potential = plate_potential(model, state.plate.w);
  if (state.plate.theta)
    for (int i = 0; i < g.npx(); ++i)
      rep.thermal += 0.5 * (*state.plate.theta)(i) * (*state.plate.theta)(i) *
                     g.wq_x(i);
  rep.viscous_dissipation_cum = viscous_dissipation_cum;
  rep.plate_dissipation_cum = plate_dissipation_cum;
  rep.total = rep.kinetic + rep.internal + rep.plate_kinetic + rep.bending +
              rep.potential + rep.thermal + viscous_dissipation_cum +
              plate_dissipation_cum;
  return rep;
}

EnergyBudget energy_budget(const Trajectory& traj, const FluidParams& params,
                           const PlateModel& model, double tolerance) {
  if (traj.states.empty())
    throw std::invalid_argument("energy_budget: empty trajectory");
  EnergyBudget budget;
  for (std::size_t m = 0; m < traj.states.size(); ++m)
    budget.reports.push_back(energy(traj.states[m], params, model,
                                    traj.viscous_dissipation_cum[m],
                                    traj.plate_dissipation_cum[m]));
  const double e0 = budget.reports.front().total;
  budget.tolerance = tolerance >= 0.0 ? tolerance : 1e-6 * (1.0 + e0);
  for (const EnergyReport& rep : budget.reports) {
    budget.gap.push_back(rep.total - e0);
    if (budget.gap.back() > budget.tolerance) ++budget.violations;
  }
  return budget;
}

EntropyReport relative_entropy(const CoupledState& s1, const CoupledState& s2,
                               const FluidParams& params, const PlateModel& model) {
  const Grid& g = s1.grid();
  require_same_grid(g, s2.grid(), "relative_entropy");
  require_same_grid(g, s1.plate.w.grid, "relative_entropy");

  EntropyReport rep;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      const double J = 1.0 + s1.plate.w(i);
      const double wq = g.wq_x(i) * g.wq_z(k);
      double du2 = 0.0;
      for (int c = 0; c < 2; ++c) {
        const double d = s1.fluid.U.comp(c, i, k) - s2.fluid.U.comp(c, i, k);
        du2 += d * d;
      }
      rep.fluid_kinetic_gap += 0.5 * J * s1.fluid.r(i, k) * du2 * wq;
      rep.pressure_gap += J *
                          pot_f(s1.fluid.r(i, k), s2.fluid.r(i, k), params.gamma) /
                          (params.gamma - 1.0) * wq;
    }
  PlateField l1 = laplacian(s1.plate.w), l2 = laplacian(s2.plate.w);
  for (int i = 0; i < g.npx(); ++i) {
    const double dv = s1.plate.v(i) - s2.plate.v(i);
    const double dl = l1(i) - l2(i);
    rep.plate_velocity_gap += 0.5 * dv * dv * g.wq_x(i);
    rep.bending_gap += 0.5 * dl * dl * g.wq_x(i);
    if (model.kind == PlateKind::thermo_quasilinear)
      rep.quasilinear_gap +=
          (std::pow(l1(i), 3) - std::pow(l2(i), 3)) * dl * g.wq_x(i);
  }
  if (s1.plate.theta || s2.plate.theta) {
    PlateField t1 = s1.plate.theta ? *s1.plate.theta : PlateField(g);
    PlateField t2 = s2.plate.theta ? *s2.plate.theta : PlateField(g);
    for (int i = 0; i < g.npx(); ++i) {
      const double dt = t1(i) - t2(i);
      rep.thermal_gap += 0.5 * dt * dt * g.wq_x(i);
    }
  }
  rep.total = rep.fluid_kinetic_gap + rep.pressure_gap + rep.plate_velocity_gap +
              rep.bending_gap + rep.thermal_gap + rep.quasilinear_gap;
  return rep;
}

DensityDistanceReport density_distance_check(const CoupledState& s1,
                                             const CoupledState& s2,
                                             const FluidParams& params,
                                             double c_r2, double C_r2) {
  const Grid& g = s1.grid();
  require_same_grid(g, s2.grid(), "density_distance_check");
  for (double v : s2.fluid.r.values)
    if (v < c_r2 || v > C_r2)
      throw std::invalid_argument("density_distance_check: r2 out of band");

  const double gamma = params.gamma;
  const double p = std::min(2.0, gamma);
  const double q = 2.0 / p;

  DensityDistanceReport rep;
  rep.constants = [&] {
    // the brute-force scan is expensive; memoize per parameter triple
    static std::mutex mtx;
    static std::map<std::array<double, 3>, PressureBounds> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.try_emplace({c_r2, C_r2, gamma});
    if (inserted) it->second = pressure_potential_bounds(c_r2, C_r2, gamma);
    return it->second;
  }();
  const double c1 = rep.constants.c_f1, c2 = rep.constants.c_f2;

  double lp = 0.0, F = 0.0, area = 0.0;
  double int_mid = 0.0;  // int over [r2/2, 2 r2] of f (region of (f1))
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      const double wq = g.wq_x(i) * g.wq_z(k);
      const double r1 = s1.fluid.r(i, k), r2 = s2.fluid.r(i, k);
      const double f = pot_f(r1, r2, gamma);
      lp += std::pow(std::abs(r1 - r2), p) * wq;
      F += f * wq;
      area += wq;
      if (r1 >= 0.5 * r2 && r1 <= 2.0 * r2) int_mid += f * wq;
    }
  rep.lhs = std::pow(lp, q);

  // region by region: outside the middle band f >= c2 (1 + r1^p), inside
  // f >= c1 |r1-r2|^max(2,gamma)
  rep.b1 = std::pow(std::pow(C_r2, p) * F / c2, q);
  if (gamma >= 2.0) {
    rep.b2 = int_mid / c1;
  } else {
    // Jensen over the band: int |r1-r2|^gamma <= |Omega|^(1-gamma/2)
    // (int f/c1)^(gamma/2), then raise to 2/gamma
    rep.b2 = std::pow(area, q - 1.0) * int_mid / c1;
  }
  rep.b3 = std::pow(F / c2, q);
  rep.bound = std::pow(3.0, q - 1.0) * (rep.b1 + rep.b2 + rep.b3);
  rep.passed = rep.lhs <= rep.bound * (1.0 + 1e-12) + 1e-300;
  return rep;
}

std::vector<double> relative_energy_residual(const Trajectory& weak,
                                             const Trajectory& strong,
                                             const FluidParams& params,
                                             const PlateModel& model) {
  const std::size_t M = weak.states.size();
  if (M < 2 || strong.states.size() != M)
    throw std::invalid_argument("relative_energy_residual: need >= 2 synchronized snapshots");
  for (std::size_t m = 0; m < M; ++m)
    if (std::abs(weak.states[m].time - strong.states[m].time) >
        1e-12 * (1.0 + std::abs(weak.states[m].time)))
      throw std::invalid_argument("relative_energy_residual: desynchronized trajectories");
  const Grid& g = weak.states.front().grid();
  require_same_grid(g, strong.states.front().grid(), "relative_energy_residual");
  const int nx = g.npx();
  const double gamma = params.gamma;

  std::vector<double> tt(M);
  for (std::size_t m = 0; m < M; ++m) tt[m] = weak.states[m].time;

  // centered time derivative of any per-snapshot sample of the strong
  // trajectory, one-sided at the series ends
  auto ddt = [&](auto&& sample, std::size_t m) {
    const std::size_t lo = (m == 0) ? 0 : m - 1;
    const std::size_t hi = (m + 1 == M) ? M - 1 : m + 1;
    return (sample(hi) - sample(lo)) / (tt[hi] - tt[lo]);
  };

  std::vector<double> remainder(M, 0.0), gap_rate(M, 0.0), entropy(M, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    const CoupledState& a = weak.states[m];    // (r1, U1, w1)
    const CoupledState& b = strong.states[m];  // (r2, U2, w2)
    entropy[m] = relative_entropy(a, b, params, model).total;
    gap_rate[m] = dissipation_gap_rate(a, b, params, model);

    AleGeometry geo1 = build_geometry(a.plate.w, a.plate.v);
    MatrixField g1 = transformed_gradient(a.fluid.U, geo1);
    MatrixField g2 = transformed_gradient(b.fluid.U, geo1);
    MatrixField S2 = stress_tensor(g2, params);
    ScalarField r2g1(g);  // r2^(gamma-1) for the pressure terms
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < nx; ++i)
        r2g1(i, k) = std::pow(b.fluid.r(i, k), gamma - 1.0);
    VectorField grad_r2g1 = transformed_gradient(r2g1, geo1);

    double R = 0.0;
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < nx; ++i) {
        const double J = 1.0 + a.plate.w(i);
        const double wq = g.wq_x(i) * g.wq_z(k);
        const double r1 = a.fluid.r(i, k), r2 = b.fluid.r(i, k);
        double acc = 0.0;
        double div2 = 0.0;
        for (int c = 0; c < 2; ++c) {
          div2 += g2.entry(c, c, i, k);
          const double du = b.fluid.U.comp(c, i, k) - a.fluid.U.comp(c, i, k);
          // S(grad_1 U2) : (grad_1 U2 - grad_1 U1)
          for (int e = 0; e < 2; ++e)
            acc += S2.entry(c, e, i, k) * (g2.entry(c, e, i, k) - g1.entry(c, e, i, k));
          // r1 (dt U2 + U1 . grad_1 U2 - w_1 . grad_1 U2) . (U2 - U1)
          double conv = ddt(
              [&](std::size_t mm) {
                return strong.states[mm].fluid.U.comp(c, i, k);
              },
              m);
          for (int e = 0; e < 2; ++e)
            conv += (a.fluid.U.comp(e, i, k) - geo1.ale_velocity.comp(e, i, k)) *
                    g2.entry(c, e, i, k);
          acc += r1 * conv * du;
          // gamma/(gamma-1) (r2 U2 - r1 U1) . grad_1 r2^(gamma-1)
          acc += gamma / (gamma - 1.0) *
                 (r2 * b.fluid.U.comp(c, i, k) - r1 * a.fluid.U.comp(c, i, k)) *
                 grad_r2g1.comp(c, i, k);
        }
        // gamma/(gamma-1) (r1 - r2)(dt r2^(gamma-1) - w_1 . grad_1 r2^(gamma-1))
        double dpt = ddt(
            [&](std::size_t mm) {
              return std::pow(strong.states[mm].fluid.r(i, k), gamma - 1.0);
            },
            m);
        for (int e = 0; e < 2; ++e)
          dpt -= geo1.ale_velocity.comp(e, i, k) * grad_r2g1.comp(e, i, k);
        acc += gamma / (gamma - 1.0) * (r1 - r2) * dpt;
        // (r2^gamma - r1^gamma) div_1 U2
        acc += (std::pow(r2, gamma) - std::pow(r1, gamma)) * div2;
        R += acc * J * wq;
      }

    // plate boundary terms of the remainder
    PlateField bil2 = bilaplacian(b.plate.w);
    PlateField lapv2 = laplacian(b.plate.v);
    PlateField fnl1(g);
    if (model.kind != PlateKind::linear &&
        model.kind != PlateKind::thermo_quasilinear)
      fnl1 = nonlinear_force(model, a.plate.w);
    for (int i = 0; i < nx; ++i) {
      const double dv = b.plate.v(i) - a.plate.v(i);
      const double d2w2 = ddt(
          [&](std::size_t mm) { return strong.states[mm].plate.v(i); }, m);
      double acc = dv * std::pow(b.fluid.r(i, g.nz), gamma) - dv * d2w2 -
                   dv * bil2(i) - model.alpha * lapv2(i) * dv;
      // semilinear extension: -<F(w1), dt w1 - dt w2>
      acc -= fnl1(i) * (a.plate.v(i) - b.plate.v(i));
      R += acc * g.wq_x(i);
    }
    if (model.kind == PlateKind::thermo_quasilinear) {
      PlateField l1 = laplacian(a.plate.w), l2 = laplacian(b.plate.w);
      for (int i = 0; i < nx; ++i)
        R -= std::pow(l2(i), 3) * (l1(i) - l2(i)) * g.wq_x(i);
    }
    if (model.kind == PlateKind::thermo_semilinear ||
        model.kind == PlateKind::thermo_quasilinear) {
      PlateField t1 = a.plate.theta ? *a.plate.theta : PlateField(g);
      PlateField t2 = b.plate.theta ? *b.plate.theta : PlateField(g);
      PlateField lt2 = laplacian(t2);
      for (int i = 0; i < nx; ++i) {
        const double dth = t2(i) - t1(i);
        const double dtt2 = ddt(
            [&](std::size_t mm) {
              return strong.states[mm].plate.theta
                         ? (*strong.states[mm].plate.theta)(i)
                         : 0.0;
            },
            m);
        R -= (dth * dtt2 + dth * lt2(i)) * g.wq_x(i);
      }
    }
    remainder[m] = R;
  }

  // trapezoid accumulation of the dissipation gap and the remainder
  std::vector<double> out(M, 0.0);
  double diss = 0.0, rem = 0.0;
  out[0] = 0.0;
  for (std::size_t m = 1; m < M; ++m) {
    const double h = tt[m] - tt[m - 1];
    diss += 0.5 * h * (gap_rate[m] + gap_rate[m - 1]);
    rem += 0.5 * h * (remainder[m] + remainder[m - 1]);
    out[m] = entropy[m] + diss - entropy[0] - rem;
  }
  return out;
}

GronwallReport gronwall_check(const std::vector<double>& times,
                              const std::vector<double>& E_series,
                              const std::vector<double>& h_series, double C,
                              double tolerance) {
  if (times.size() != E_series.size() || times.size() != h_series.size())
    throw std::invalid_argument("gronwall_check: series length mismatch");
  GronwallReport rep;
  if (times.empty()) return rep;
  double hint = 0.0;
  for (std::size_t m = 0; m < times.size(); ++m) {
    if (m > 0)
      hint += 0.5 * (times[m] - times[m - 1]) * (h_series[m] + h_series[m - 1]);
    const double bound = E_series[0] * std::exp(C * hint) + tolerance;
    rep.worst_excess = std::max(rep.worst_excess, E_series[m] - bound);
    if (E_series[m] > bound) rep.passed = false;
  }
  return rep;
}

}  // namespace fsilab
