#include "fsilab/coupling.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "fsilab/spectral.hpp"
#include "fsilab/stencil.hpp"

namespace fsilab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

bool is_thermo(const PlateModel& model) {
  return model.kind == PlateKind::thermo_semilinear ||
         model.kind == PlateKind::thermo_quasilinear;
}

void require_coupled_grid(const Grid& g, const char* where) {
  if (!g.periodic() || g.ny != 0)
    throw std::invalid_argument(std::string(where) +
                                ": coupled runs need a periodic 1D plate");
}

/// Eigenvalues of the 3-point plate Laplacian per DFT mode (all <= 0).
std::vector<double> laplacian_symbol(const Grid& g) {
  const int n = g.npx();
  std::vector<double> lam(static_cast<std::size_t>(n));
  const double h2 = g.hx() * g.hx();
  for (int m = 0; m < n; ++m)
    lam[static_cast<std::size_t>(m)] =
        (2.0 * std::cos(2.0 * std::numbers::pi * m / n) - 2.0) / h2;
  return lam;
}

/// Solves (1 + dt^2 lam^2 - dt alpha lam) v = rhs mode by mode.
PlateField solve_plate_implicit(const PlateField& rhs, double dt, double alpha) {
  const Grid& g = rhs.grid;
  auto lam = laplacian_symbol(g);
  auto c = dft(rhs.values);
  for (std::size_t m = 0; m < c.size(); ++m)
    c[m] /= 1.0 + dt * dt * lam[m] * lam[m] - dt * alpha * lam[m];
  PlateField out(g);
  out.values = idft(c);
  return out;
}

/// Solves (1 - dt lam) theta_new = theta + dt lam v_new mode by mode.
PlateField solve_heat_implicit(const PlateField& theta, const PlateField& v_new,
                               double dt) {
  const Grid& g = theta.grid;
  auto lam = laplacian_symbol(g);
  auto ct = dft(theta.values);
  auto cv = dft(v_new.values);
  for (std::size_t m = 0; m < ct.size(); ++m)
    ct[m] = (ct[m] + dt * lam[m] * cv[m]) / (1.0 - dt * lam[m]);
  PlateField out(g);
  out.values = idft(ct);
  return out;
}

/// First-derivative stencil matrices on the fluid grid, matching fluid_dx
/// (centered, periodic) and fluid_dz (centered, one-sided at the walls).
struct DerivOps {
  SpMat dx, dz;
};

const DerivOps& deriv_ops(const Grid& g) {
  static std::mutex mtx;
  static std::map<std::string, DerivOps> cache;
  const std::string key = std::to_string(g.nx) + ":" + std::to_string(g.nz) +
                          ":" + std::to_string(g.lx);
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const int nx = g.npx(), nrow = g.fluid_rows(), N = g.fluid_nodes();
  auto node = [&](int i, int k) { return k * nx + i; };
  std::vector<Trip> tx, tz;
  tx.reserve(static_cast<std::size_t>(2 * N));
  tz.reserve(static_cast<std::size_t>(3 * N));
  const double cx = 1.0 / (2.0 * g.hx()), cz = 1.0 / (2.0 * g.hz());
  for (int k = 0; k < nrow; ++k)
    for (int i = 0; i < nx; ++i) {
      const int r = node(i, k);
      tx.emplace_back(r, node((i + 1) % nx, k), cx);
      tx.emplace_back(r, node((i + nx - 1) % nx, k), -cx);
      if (k == 0) {
        tz.emplace_back(r, node(i, 0), -3.0 * cz);
        tz.emplace_back(r, node(i, 1), 4.0 * cz);
        tz.emplace_back(r, node(i, 2), -cz);
      } else if (k == g.nz) {
        tz.emplace_back(r, node(i, g.nz), 3.0 * cz);
        tz.emplace_back(r, node(i, g.nz - 1), -4.0 * cz);
        tz.emplace_back(r, node(i, g.nz - 2), cz);
      } else {
        tz.emplace_back(r, node(i, k + 1), cz);
        tz.emplace_back(r, node(i, k - 1), -cz);
      }
    }
  DerivOps ops;
  ops.dx.resize(N, N);
  ops.dz.resize(N, N);
  ops.dx.setFromTriplets(tx.begin(), tx.end());
  ops.dz.setFromTriplets(tz.begin(), tz.end());
  return cache.emplace(key, std::move(ops)).first->second;
}

/// Backward-Euler viscous solve (I - dt (1/r) div^w S(grad^w .)) U = U_star
/// with the wall rows replaced by Dirichlet conditions: U = 0 on the rigid
/// bottom and U = (0, v_new) on the interface.
VectorField implicit_viscous_solve(const VectorField& U_star,
                                   const VectorField& U_guess,
                                   const ScalarField& r_new,
                                   const AleGeometry& geo,
                                   const PlateField& v_new,
                                   const FluidParams& params, double dt) {
  const Grid& g = U_star.grid;
  const int nx = g.npx(), N = g.fluid_nodes();
  const DerivOps& ops = deriv_ops(g);

  Eigen::VectorXd m10(N), m11(N);
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < nx; ++i) {
      const int n = k * nx + i;
      m10(n) = geo.inv_grad.entry(1, 0, i, k);
      m11(n) = geo.inv_grad.entry(1, 1, i, k);
    }
  SpMat dg0 = ops.dx + SpMat(m10.asDiagonal() * ops.dz);
  SpMat dg1 = m11.asDiagonal() * ops.dz;
  SpMat lap = SpMat(dg0 * dg0) + SpMat(dg1 * dg1);
  const double mu = params.mu, ml = params.mu + params.lambda;
  std::array<std::array<SpMat, 2>, 2> block;
  block[0][0] = mu * lap + ml * SpMat(dg0 * dg0);
  block[0][1] = ml * SpMat(dg0 * dg1);
  block[1][0] = ml * SpMat(dg1 * dg0);
  block[1][1] = mu * lap + ml * SpMat(dg1 * dg1);

  auto wall_node = [&](int n) { return n < nx || n >= N - nx; };

  std::vector<Trip> trips;
  trips.reserve(static_cast<std::size_t>(2 * N) + 4 * block[0][0].nonZeros());
  for (int n = 0; n < 2 * N; ++n) trips.emplace_back(n, n, 1.0);
  for (int br = 0; br < 2; ++br)
    for (int bc = 0; bc < 2; ++bc)
      for (int j = 0; j < block[br][bc].outerSize(); ++j)
        for (SpMat::InnerIterator it(block[br][bc], j); it; ++it) {
          const int row = static_cast<int>(it.row());
          if (wall_node(row)) continue;
          trips.emplace_back(br * N + row, bc * N + static_cast<int>(it.col()),
                             -dt * it.value() /
                                 r_new.values[static_cast<std::size_t>(row)]);
        }
  SpMat A(2 * N, 2 * N);
  A.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd b(2 * N), x0(2 * N);
  for (int c = 0; c < 2; ++c)
    for (int n = 0; n < N; ++n) {
      double bv = U_star.values[static_cast<std::size_t>(c * N + n)];
      double gv = U_guess.values[static_cast<std::size_t>(c * N + n)];
      if (wall_node(n)) {
        bv = (c == 1 && n >= N - nx) ? v_new(n - (N - nx)) : 0.0;
        gv = bv;
      }
      b(c * N + n) = bv;
      x0(c * N + n) = gv;
    }

  Eigen::BiCGSTAB<SpMat> solver;
  solver.setTolerance(1e-12);
  solver.setMaxIterations(4000);
  solver.compute(A);
  Eigen::VectorXd x = solver.solveWithGuess(b, x0);
  if (solver.info() != Eigen::Success)
    throw SolverError("implicit viscous solve did not converge (error " +
                      std::to_string(solver.error()) + ")");

  VectorField out(g, 2);
  for (int c = 0; c < 2; ++c)
    for (int n = 0; n < N; ++n)
      out.values[static_cast<std::size_t>(c * N + n)] = x(c * N + n);
  // re-impose the wall rows exactly; the iterative solve leaves them at its
  // tolerance and the kinematic-coupling invariant is advertised as exact
  for (int i = 0; i < nx; ++i) {
    out.comp(0, i, 0) = 0.0;
    out.comp(1, i, 0) = 0.0;
    out.comp(0, i, g.nz) = 0.0;
    out.comp(1, i, g.nz) = v_new(i);
  }
  return out;
}

double viscous_dissipation_rate(const VectorField& U, const AleGeometry& geo,
                                const FluidParams& params) {
  const Grid& g = U.grid;
  MatrixField gu = transformed_gradient(U, geo);
  double acc = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      double sq = 0.0, tr = 0.0;
      for (int r = 0; r < 2; ++r) {
        tr += gu.entry(r, r, i, k);
        for (int c = 0; c < 2; ++c) sq += gu.entry(r, c, i, k) * gu.entry(r, c, i, k);
      }
      acc += (params.mu * sq + (params.mu + params.lambda) * tr * tr) *
             geo.jacobian(i, k) * g.wq_x(i) * g.wq_z(k);
    }
  return acc;
}

}  // namespace

CoupledState validate_initial_data(const InitialData& data) {
  const Grid& g = data.rho0.grid;
  require_same_grid(g, data.momentum0.grid, "validate_initial_data");
  require_same_grid(g, data.w0.grid, "validate_initial_data");
  require_same_grid(g, data.v0.grid, "validate_initial_data");
  if (data.theta0) require_same_grid(g, data.theta0->grid, "validate_initial_data");

  VectorField U0(g, 2);
  const int N = g.fluid_nodes();
  for (int n = 0; n < N; ++n) {
    const double rho = data.rho0.values[static_cast<std::size_t>(n)];
    if (!std::isfinite(rho) || rho < 0.0)
      throw ValidationError("rho0 must be finite and nonnegative");
    for (int c = 0; c < 2; ++c) {
      const double m = data.momentum0.values[static_cast<std::size_t>(c * N + n)];
      if (!std::isfinite(m))
        throw ValidationError("momentum0 must be finite");
      if (m != 0.0 && rho == 0.0)
        throw ValidationError("rho0 > 0 wherever momentum0 != 0");
      if (rho > 0.0) {
        const double u = m / rho;
        if (!std::isfinite(u * m))
          throw ValidationError("kinetic energy momentum0^2 / rho0 must be finite");
        U0.values[static_cast<std::size_t>(c * N + n)] = u;
      }
    }
  }
  for (double wv : data.w0.values) {
    if (!std::isfinite(wv) || wv <= -1.0)
      throw ValidationError("w0 > -1, on Gamma");
  }
  if (!g.periodic()) {
    const int n = g.npx();
    for (int j = 0; j < g.npy(); ++j) {
      if (data.w0.at(0, j) != 0.0 || data.w0.at(n - 1, j) != 0.0)
        throw ValidationError("clamped data need w0 = 0 on the boundary");
      if (std::abs(plate_dx(data.w0, 0, j)) > 1e-12 ||
          std::abs(plate_dx(data.w0, n - 1, j)) > 1e-12)
        throw ValidationError("clamped data need dn_w0 = 0 on the boundary");
    }
  }
  if (!data.v0.all_finite())
    throw ValidationError("v0 must be finite");

  CoupledState s{FluidState{data.rho0, U0},
                 PlateState{data.w0, data.v0, data.theta0}, 0.0};
  return s;
}

PlateField fluid_load(const CoupledState& state, const AleGeometry& geo,
                      const FluidParams& params) {
  const Grid& g = state.grid();
  require_same_grid(g, geo.grid(), "fluid_load");
  MatrixField S = stress_tensor(transformed_gradient(state.fluid.U, geo), params);
  PlateField load(g);
  const int top = g.nz;
  for (int i = 0; i < g.npx(); ++i)
    load(i) = S.entry(1, 0, i, top) * geo.dwdx(i) - S.entry(1, 1, i, top) +
              std::pow(state.fluid.r(i, top), params.gamma);
  return load;
}

CoupledState step(const CoupledState& state, const SchemeConfig& config,
                  const FluidParams& params, const PlateModel& model,
                  const Forcing& forcing, StepStats* stats) {
  config.validate();
  model.validate();
  const Grid& g = state.grid();
  require_coupled_grid(g, "step");
  require_same_grid(g, state.plate.w.grid, "step");
  params.validate(2, model.alpha);
  const double dt = config.dt;
  const double t = state.time;
  const int nx = g.npx();

  AleGeometry geo_old = build_geometry(state.plate.w, state.plate.v);

  // --- plate: backward Euler, explicit nonlinear force and fluid load ---
  PlateField load = fluid_load(state, geo_old, params);
  if (forcing.plate) {
    PlateField fp = forcing.plate(t);
    for (int i = 0; i < nx; ++i) load(i) += fp(i);
  }
  if (model.kind != PlateKind::linear) {
    PlateField fnl = nonlinear_force(model, state.plate.w);
    for (int i = 0; i < nx; ++i) load(i) -= fnl(i);
  }
  PlateField bil = bilaplacian(state.plate.w);
  PlateField rhs(g);
  for (int i = 0; i < nx; ++i)
    rhs(i) = state.plate.v(i) + dt * (load(i) - bil(i));
  PlateField v_new = solve_plate_implicit(rhs, dt, model.alpha);

  PlateField w_new(g);
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nx; ++i) {
    w_new(i) = state.plate.w(i) + dt * v_new(i);
    min_gap = std::min(min_gap, 1.0 + w_new(i));
  }
  if (!(min_gap > config.collision_eps)) throw CollisionError(min_gap);

  // --- continuity: conservative upwind transport; the wall fluxes vanish
  // once the wall velocities carry the new boundary conditions ---
  VectorField U_bc = state.fluid.U;
  for (int i = 0; i < nx; ++i) {
    U_bc.comp(0, i, 0) = 0.0;
    U_bc.comp(1, i, 0) = 0.0;
    U_bc.comp(0, i, g.nz) = 0.0;
    U_bc.comp(1, i, g.nz) = v_new(i);
  }
  AleGeometry geo_flux = build_geometry(state.plate.w, v_new);
  ScalarField flux =
      transport_flux_divergence(FluidState{state.fluid.r, U_bc}, geo_flux);
  ScalarField src_r = forcing.mass ? forcing.mass(t) : ScalarField(g);
  ScalarField r_new(g);
  double r_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < nx; ++i) {
      const double j_old = geo_old.jacobian(i, k);
      const double j_new = 1.0 + w_new(i);
      r_new(i, k) =
          (j_old * (state.fluid.r(i, k) + dt * src_r(i, k)) - dt * flux(i, k)) /
          j_new;
      r_min = std::min(r_min, r_new(i, k));
    }
  if (r_min < r_floor) throw VacuumError(r_min);

  AleGeometry geo_new = build_geometry(w_new, v_new);

  // --- momentum: explicit convection and pressure, implicit viscous ---
  FluidState old_bc{state.fluid.r, U_bc};
  VectorField conv = convection_term(old_bc, geo_old);
  VectorField press = pressure_term(old_bc, geo_old, params);
  VectorField U_star = U_bc;
  for (std::size_t n = 0; n < U_star.values.size(); ++n)
    U_star.values[n] += dt * (conv.values[n] + press.values[n]);
  if (forcing.momentum) {
    VectorField fm = forcing.momentum(t);
    for (std::size_t n = 0; n < U_star.values.size(); ++n)
      U_star.values[n] += dt * fm.values[n];
  }
  VectorField U_new =
      implicit_viscous_solve(U_star, U_bc, r_new, geo_new, v_new, params, dt);

  CoupledState out{FluidState{r_new, U_new},
                   PlateState{w_new, v_new, state.plate.theta}, t + dt};

  // --- thermoelastic heat update ---
  if (is_thermo(model)) {
    PlateField theta = state.plate.theta ? *state.plate.theta : PlateField(g);
    out.plate.theta = solve_heat_implicit(theta, v_new, dt);
  }

  if (stats) {
    stats->viscous_dissipation =
        dt * viscous_dissipation_rate(U_new, geo_new, params);
    stats->plate_dissipation = dt * model.alpha * dirichlet_energy(v_new);
    if (out.plate.theta)
      stats->plate_dissipation += dt * dirichlet_energy(*out.plate.theta);
  }
  return out;
}

Trajectory run(const InitialData& data, const SchemeConfig& config,
               const FluidParams& params, const PlateModel& model,
               const Forcing& forcing) {
  config.validate();
  CoupledState s = validate_initial_data(data);
  require_coupled_grid(s.grid(), "run");

  Trajectory traj;
  traj.states.push_back(s);
  traj.viscous_dissipation_cum.push_back(0.0);
  traj.plate_dissipation_cum.push_back(0.0);

  double visc = 0.0, plat = 0.0;
  const double hx = s.grid().hx();
  int steps = 0;
  while (s.time < config.t_end - 1e-14 * std::max(1.0, config.t_end)) {
    double umax = 0.0;
    for (double v : s.fluid.U.values) umax = std::max(umax, std::abs(v));
    SchemeConfig local = config;
    local.dt = std::min(config.dt, config.t_end - s.time);
    if (umax > 0.0) local.dt = std::min(local.dt, config.cfl_safety * hx / umax);

    StepStats st;
    s = step(s, local, params, model, forcing, &st);
    visc += st.viscous_dissipation;
    plat += st.plate_dissipation;
    ++steps;
    const bool at_end =
        s.time >= config.t_end - 1e-14 * std::max(1.0, config.t_end);
    if (steps % config.output_every == 0 || at_end) {
      traj.states.push_back(s);
      traj.viscous_dissipation_cum.push_back(visc);
      traj.plate_dissipation_cum.push_back(plat);
    }
  }
  return traj;
}

double weak_momentum_residual(const Trajectory& traj,
                              const std::vector<VectorField>& q,
                              const std::vector<PlateField>& psi,
                              const FluidParams& params, const PlateModel& model) {
  const std::size_t M = traj.states.size();
  if (M < 2) throw std::invalid_argument("weak_momentum_residual: need >= 2 snapshots");
  if (q.size() != M || psi.size() != M)
    throw std::invalid_argument("weak_momentum_residual: test series length mismatch");
  const Grid& g = traj.states.front().grid();
  const int nx = g.npx();

  for (std::size_t m = 0; m < M; ++m) {
    require_same_grid(g, q[m].grid, "weak_momentum_residual");
    for (int i = 0; i < nx; ++i) {
      if (std::abs(q[m].comp(0, i, 0)) > 1e-10 ||
          std::abs(q[m].comp(1, i, 0)) > 1e-10 ||
          std::abs(q[m].comp(0, i, g.nz)) > 1e-10 ||
          std::abs(q[m].comp(1, i, g.nz) - psi[m](i)) > 1e-10)
        throw std::invalid_argument(
            "weak_momentum_residual: inadmissible test pair (needs q = 0 on "
            "the wall and q = psi e_d on the interface)");
    }
  }

  std::vector<double> tt(M);
  for (std::size_t m = 0; m < M; ++m) tt[m] = traj.states[m].time;

  auto time_weight = [&](std::size_t m) {
    if (m == 0) return 0.5 * (tt[1] - tt[0]);
    if (m + 1 == M) return 0.5 * (tt[M - 1] - tt[M - 2]);
    return 0.5 * (tt[m + 1] - tt[m - 1]);
  };
  // snapshot-series time derivative: centered inside, one-sided at the ends
  auto dserial = [&](auto&& at, std::size_t m, std::size_t comp) {
    const std::size_t lo = (m == 0) ? 0 : m - 1;
    const std::size_t hi = (m + 1 == M) ? M - 1 : m + 1;
    return (at(hi, comp) - at(lo, comp)) / (tt[hi] - tt[lo]);
  };

  double lhs = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const CoupledState& s = traj.states[m];
    AleGeometry geo = build_geometry(s.plate.w, s.plate.v);
    MatrixField gq = transformed_gradient(q[m], geo);
    MatrixField gu = transformed_gradient(s.fluid.U, geo);
    MatrixField S = stress_tensor(gu, params);

    double vol = 0.0;
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < nx; ++i) {
        const double jw = geo.jacobian(i, k) * g.wq_x(i) * g.wq_z(k);
        const double r = s.fluid.r(i, k);
        const double pg = std::pow(r, params.gamma);
        double acc = pg * (gq.entry(0, 0, i, k) + gq.entry(1, 1, i, k));
        for (int c = 0; c < 2; ++c) {
          // material derivative of the pulled-back test function:
          // dt_q o A = d/dt Q - w_dom . grad^w Q
          double dq = dserial(
              [&](std::size_t mm, std::size_t cc) {
                return q[mm].comp(static_cast<int>(cc), i, k);
              },
              m, static_cast<std::size_t>(c));
          for (int e = 0; e < 2; ++e)
            dq -= geo.ale_velocity.comp(e, i, k) * gq.entry(c, e, i, k);
          acc += r * s.fluid.U.comp(c, i, k) * dq;
          for (int e = 0; e < 2; ++e)
            acc += r * s.fluid.U.comp(c, i, k) * s.fluid.U.comp(e, i, k) *
                       gq.entry(c, e, i, k) -
                   S.entry(c, e, i, k) * gq.entry(c, e, i, k);
        }
        vol += acc * jw;
      }

    PlateField lw = laplacian(s.plate.w);
    PlateField lpsi = laplacian(psi[m]);
    double plate = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double dpsi = dserial(
          [&](std::size_t mm, std::size_t) { return psi[mm](i); }, m, 0);
      plate += (s.plate.v(i) * dpsi - lw(i) * lpsi(i) -
                model.alpha * plate_dx(s.plate.v, i) * plate_dx(psi[m], i)) *
               g.wq_x(i);
    }
    lhs += time_weight(m) * (vol + plate);
  }

  auto endpoint = [&](std::size_t m) {
    const CoupledState& s = traj.states[m];
    AleGeometry geo = build_geometry(s.plate.w, s.plate.v);
    double acc = 0.0;
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < nx; ++i)
        for (int c = 0; c < 2; ++c)
          acc += s.fluid.r(i, k) * s.fluid.U.comp(c, i, k) * q[m].comp(c, i, k) *
                 geo.jacobian(i, k) * g.wq_x(i) * g.wq_z(k);
    for (int i = 0; i < nx; ++i) acc += s.plate.v(i) * psi[m](i) * g.wq_x(i);
    return acc;
  };
  const double rhs_pairing = endpoint(M - 1) - endpoint(0);
  return std::abs(lhs - rhs_pairing);
}

}  // namespace fsilab
