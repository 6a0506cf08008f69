#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fsilab/fluid.hpp"

using namespace fsilab;

namespace {
constexpr double TWO_PI = 2.0 * std::numbers::pi;

AleGeometry flat_geo(const Grid& g) {
  return build_geometry(PlateField(g, 0.0), PlateField(g, 0.0));
}
}  // namespace

TEST_CASE("params validation: the gamma case table") {
  FluidParams p;
  CHECK_NOTHROW(p.validate(2, 0.0));
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(2, 0.0), std::invalid_argument);
  p.gamma = 1.6;
  CHECK_NOTHROW(p.validate(3, 1.0));                       // > 3/2 with alpha > 0
  CHECK_THROWS_AS(p.validate(3, 0.0), std::invalid_argument);  // <= 12/7
  p.gamma = 1.8;
  CHECK_NOTHROW(p.validate(3, 0.0));
  p = FluidParams{};
  p.mu = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = FluidParams{};
  p.lambda = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // lambda + 2/3 <= 0
}

TEST_CASE("pressure law") {
  Grid g(8, 4, 1.0);
  FluidParams p;
  CHECK(pressure(ScalarField(g, 1.0), p)(2, 2) == doctest::Approx(1.0));
  CHECK(pressure(ScalarField(g, 2.0), p)(2, 2) == doctest::Approx(4.0));
  CHECK(pressure(ScalarField(g, 0.0), p)(2, 2) == doctest::Approx(0.0));
  CHECK_THROWS_AS(pressure(ScalarField(g, -0.5), p), std::invalid_argument);
}

TEST_CASE("stress tensor") {
  Grid g(8, 4, 1.0);
  FluidParams p;  // mu = 1, lambda = 0
  MatrixField zero(g, 2);
  for (double v : stress_tensor(zero, p).values) CHECK(v == 0.0);

  MatrixField eye(g, 2);
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      eye.entry(0, 0, i, k) = 1.0;
      eye.entry(1, 1, i, k) = 1.0;
    }
  MatrixField s = stress_tensor(eye, p);
  CHECK(s.entry(0, 0, 3, 2) == doctest::Approx(3.0));
  CHECK(s.entry(1, 1, 3, 2) == doctest::Approx(3.0));
  CHECK(s.entry(0, 1, 3, 2) == doctest::Approx(0.0));

  MatrixField anti(g, 2);
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      anti.entry(0, 1, i, k) = 2.0;
      anti.entry(1, 0, i, k) = -2.0;
    }
  FluidParams p2;
  p2.mu = 3.0;
  p2.lambda = 1.0;
  MatrixField sa = stress_tensor(anti, p2);
  CHECK(sa.entry(0, 1, 1, 1) == doctest::Approx(6.0));
  CHECK(sa.entry(1, 0, 1, 1) == doctest::Approx(-6.0));
  CHECK(sa.entry(0, 0, 1, 1) == doctest::Approx(0.0));

  // linearity
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  MatrixField a(g, 2), b(g, 2), ab(g, 2);
  for (std::size_t n = 0; n < a.values.size(); ++n) {
    a.values[n] = un(rng);
    b.values[n] = un(rng);
    ab.values[n] = 2.0 * a.values[n] - 3.0 * b.values[n];
  }
  MatrixField sab = stress_tensor(ab, p2), saa = stress_tensor(a, p2),
              sbb = stress_tensor(b, p2);
  for (std::size_t n = 0; n < a.values.size(); ++n)
    CHECK(sab.values[n] ==
          doctest::Approx(2.0 * saa.values[n] - 3.0 * sbb.values[n]).epsilon(1e-12));
}

TEST_CASE("continuity rhs: constant states") {
  Grid g(16, 16, TWO_PI);
  FluidState s{ScalarField(g, 2.0), VectorField(g, 2, 0.0)};
  for (double v : continuity_rhs(s, flat_geo(g)).values) CHECK(v == doctest::Approx(0.0));

  FluidState sc{ScalarField(g, 1.0), VectorField(g, 2)};
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      sc.U.comp(0, i, k) = 0.7;
      sc.U.comp(1, i, k) = -0.4;
    }
  for (double v : continuity_rhs(sc, flat_geo(g)).values)
    CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("continuity rhs conserves mass on coupled states") {
  Grid g(24, 24, TWO_PI);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> un(-0.5, 0.5);
  PlateField w(g), wt(g);
  for (int i = 0; i < g.npx(); ++i) {
    w(i) = 0.3 * std::sin(g.x(i));
    wt(i) = 0.2 * std::cos(g.x(i));
  }
  AleGeometry geo = build_geometry(w, wt);

  FluidState s{ScalarField(g), VectorField(g, 2)};
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      s.r(i, k) = 1.0 + 0.5 * un(rng) + 0.5;
      const double zp1 = g.z(k) + 1.0;
      // no-slip bottom, kinematic top
      s.U.comp(0, i, k) = un(rng) * zp1 * (1.0 - zp1);
      s.U.comp(1, i, k) = zp1 * wt(i) + un(rng) * zp1 * (1.0 - zp1);
    }
  ScalarField rhs = continuity_rhs(s, geo);
  // d/dt of sum J r vol = sum (wt r + J rhs) vol must telescope away
  double drift = 0.0, scale = 0.0;
  for (int k = 0; k <= g.nz; ++k)
    for (int i = 0; i < g.npx(); ++i) {
      drift += (wt(i) * s.r(i, k) + geo.jacobian(i, k) * rhs(i, k)) * g.wq_x(i) * g.wq_z(k);
      scale += std::abs(rhs(i, k)) * g.wq_x(i) * g.wq_z(k);
    }
  CHECK(std::abs(drift) < 1e-12 * (1.0 + scale));
}

TEST_CASE("continuity rhs matches the analytic transport at first order") {
  // w = a sin X, wt = 0, r = 2 + cos X, U = (sin X, (z+1) cos X)
  const double a = 0.1;
  auto sup_err = [&](int n) {
    Grid g(n, n, TWO_PI);
    PlateField w(g), wt(g);
    for (int i = 0; i < g.npx(); ++i) w(i) = a * std::sin(g.x(i));
    AleGeometry geo = build_geometry(w, wt);
    FluidState s{ScalarField(g), VectorField(g, 2)};
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) {
        s.r(i, k) = 2.0 + std::cos(g.x(i));
        s.U.comp(0, i, k) = std::sin(g.x(i));
        s.U.comp(1, i, k) = (g.z(k) + 1.0) * std::cos(g.x(i));
      }
    ScalarField rhs = continuity_rhs(s, geo);
    double e = 0.0;
    for (int k = 1; k < g.nz; ++k)  // interior rows (one-sided walls are first order anyway)
      for (int i = 0; i < g.npx(); ++i) {
        const double X = g.x(i);
        const double J = 1.0 + a * std::sin(X);
        // d/dX [ (1 + a sin X)(2 + cos X) sin X ]
        const double dflux_x = a * std::cos(X) * (2.0 + std::cos(X)) * std::sin(X) -
                               J * std::sin(X) * std::sin(X) +
                               J * (2.0 + std::cos(X)) * std::cos(X);
        // d/dz [ r (v - (z+1) w' u) ] = (2 + cos X) cos X (1 - a sin X)
        const double dflux_z =
            (2.0 + std::cos(X)) * std::cos(X) * (1.0 - a * std::sin(X));
        const double exact = -(dflux_x + dflux_z) / J;
        e = std::max(e, std::abs(rhs(i, k) - exact));
      }
    return e;
  };
  CHECK(sup_err(32) / sup_err(64) > 1.6);
}

TEST_CASE("momentum rhs: equilibrium and vacuum guard") {
  Grid g(16, 16, TWO_PI);
  FluidState s{ScalarField(g, 2.0), VectorField(g, 2, 0.0)};
  FluidParams p;
  for (double v : momentum_rhs(s, flat_geo(g), p).values)
    CHECK(v == doctest::Approx(0.0));

  FluidState vac{ScalarField(g, 0.0), VectorField(g, 2, 0.0)};
  CHECK_THROWS_AS(momentum_rhs(vac, flat_geo(g), p), VacuumError);
}

TEST_CASE("momentum rhs matches analytic terms at first order") {
  // w = 0, r = 2 + 0.5 cos X, U = (sin X, 0), gamma = 2, mu = 1, lambda = 0
  FluidParams p;
  auto sup_err = [&](int n) {
    Grid g(n, n, TWO_PI);
    FluidState s{ScalarField(g), VectorField(g, 2)};
    for (int k = 0; k <= g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) {
        s.r(i, k) = 2.0 + 0.5 * std::cos(g.x(i));
        s.U.comp(0, i, k) = std::sin(g.x(i));
      }
    VectorField rhs = momentum_rhs(s, flat_geo(g), p);
    double e = 0.0;
    for (int k = 1; k < g.nz; ++k)
      for (int i = 0; i < g.npx(); ++i) {
        const double X = g.x(i);
        const double r = 2.0 + 0.5 * std::cos(X);
        // conv = -u u_X ; pressure = -(1/r) d(r^2)/dX = -2 r_X = sin X
        // S = [[2 cos X, 0], [0, cos X]], divS = (-2 sin X, 0)
        const double exact0 = -std::sin(X) * std::cos(X) + std::sin(X) -
                              2.0 * std::sin(X) / r;
        e = std::max(e, std::abs(rhs.comp(0, i, k) - exact0));
        e = std::max(e, std::abs(rhs.comp(1, i, k)));
      }
    return e;
  };
  CHECK(sup_err(32) / sup_err(64) > 1.6);
}

TEST_CASE("momentum rhs stays finite on random admissible states") {
  Grid g(16, 16, TWO_PI);
  FluidParams p;
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    PlateField w(g), wt(g);
    for (int i = 0; i < g.npx(); ++i) {
      w(i) = 0.4 * un(rng);
      wt(i) = un(rng);
    }
    AleGeometry geo = build_geometry(w, wt);
    FluidState s{ScalarField(g), VectorField(g, 2)};
    for (std::size_t n = 0; n < s.r.values.size(); ++n)
      s.r.values[n] = 0.5 + 0.4 * un(rng) + 0.4;
    for (std::size_t n = 0; n < s.U.values.size(); ++n) s.U.values[n] = un(rng);
    CHECK(momentum_rhs(s, geo, p).all_finite());
  }
}

TEST_CASE("pressure potential pointwise") {
  CHECK(pressure_potential(3.0, 3.0, 2.0) == doctest::Approx(0.0));
  CHECK(pressure_potential(0.7, 0.7, 1.4) == doctest::Approx(0.0));
  CHECK(pressure_potential(2.0, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK(pressure_potential(0.0, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pressure_potential(-1.0, 1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(pressure_potential(1.0, 0.0, 2.0), std::domain_error);
}

TEST_CASE("pressure potential is nonnegative, zero only on the diagonal") {
  for (double gamma : {1.5, 2.0, 3.0})
    for (int jy = 1; jy <= 20; ++jy)
      for (int jx = 0; jx <= 40; ++jx) {
        const double y = 0.1 * jy, x = 0.1 * jx;
        const double f = pressure_potential(x, y, gamma);
        CHECK(f >= -1e-14);
        if (std::abs(x - y) > 1e-12) CHECK(f > 0.0);
      }
}

TEST_CASE("pressure potential bounds") {
  PressureBounds b = pressure_potential_bounds(1.0, 1.0, 2.0);
  CHECK(b.c_f1 == doctest::Approx(1.0).epsilon(1e-6));  // f(x,1) = (x-1)^2 exactly
  CHECK(b.c_f2 == doctest::Approx(0.2).epsilon(1e-2));  // attained at x = 2
  CHECK(b.c == doctest::Approx(std::min(b.c_f1, b.c_f2)));

  // returned constants hold on a 10x finer verification grid
  for (double gamma : {1.5, 2.0, 3.0}) {
    PressureBounds bb = pressure_potential_bounds(0.5, 2.0, gamma, 200);
    const double p1 = std::max(2.0, gamma), p2 = std::min(2.0, gamma);
    const int fine = 2000;
    int violations = 0;
    for (int jy = 0; jy <= fine; ++jy) {
      const double y = 0.5 + 1.5 * jy / fine;
      for (int jx = 0; jx <= fine; ++jx) {
        const double x = 20.0 * jx / fine;
        const double f = pressure_potential(x, y, gamma);
        if (x >= 0.5 * y && x <= 2.0 * y) {
          if (std::abs(x - y) < 1e-5 * y) continue;  // same exclusion as the scan
          if (f < bb.c_f1 * std::pow(std::abs(x - y), p1) * (1.0 - 1e-9)) ++violations;
        } else {
          if (f < bb.c_f2 * (1.0 + std::pow(x, p2)) * (1.0 - 1e-9)) ++violations;
        }
      }
    }
    CHECK(violations == 0);
  }
}
