// Benchmark of the OpenMP-parallel kernels against their serial reference
// implementations. Verifies nodewise agreement first, then reports timings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "fsilab/parallel.hpp"
#include "fsilab/ref_kernels.hpp"

using namespace fsilab;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n)
    m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

template <class F>
double time_ms(F&& body, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const Grid g(512, 512, 2.0 * std::numbers::pi);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  PlateField w(g), wt(g);
  for (int i = 0; i < g.npx(); ++i) {
    w(i) = 0.2 * std::sin(g.x(i)) + 0.05 * u(rng);
    wt(i) = 0.3 * u(rng);
  }
  const AleGeometry geo = build_geometry(w, wt);

  FluidState state{ScalarField(g), VectorField(g, 2)};
  for (double& v : state.r.values) v = 1.0 + 0.3 * u(rng);
  for (double& v : state.U.values) v = u(rng);
  ScalarField f(g);
  for (double& v : f.values) v = u(rng);
  PlateField p(g);
  for (double& v : p.values) v = u(rng);

  // agreement gate: serial reference vs parallel kernel, nodewise
  const double d_grad = max_abs_diff(transformed_gradient(f, geo).values,
                                     ref::transformed_gradient(f, geo).values);
  const double d_div = max_abs_diff(transformed_divergence(state.U, geo).values,
                                    ref::transformed_divergence(state.U, geo).values);
  const double d_conv = max_abs_diff(convection_term(state, geo).values,
                                     ref::convection_term(state, geo).values);
  const double d_lap = max_abs_diff(laplacian(p).values, ref::laplacian(p).values);
  std::printf("openmp: %s\n", openmp_enabled() ? "enabled" : "disabled");
  std::printf("max |parallel - serial|: gradient %.3e, divergence %.3e, "
              "convection %.3e, laplacian %.3e\n",
              d_grad, d_div, d_conv, d_lap);
  const double tol = 1e-11;
  if (d_grad > tol || d_div > tol || d_conv > tol || d_lap > tol) {
    std::fprintf(stderr, "kernel mismatch beyond %.1e\n", tol);
    return 1;
  }

  const int reps = 20;
  struct Row {
    const char* name;
    double parallel_ms;
    double serial_ms;
  };
  const Row rows[] = {
      {"transformed_gradient",
       time_ms([&] { transformed_gradient(f, geo); }, reps),
       time_ms([&] { ref::transformed_gradient(f, geo); }, reps)},
      {"transformed_divergence",
       time_ms([&] { transformed_divergence(state.U, geo); }, reps),
       time_ms([&] { ref::transformed_divergence(state.U, geo); }, reps)},
      {"convection_term", time_ms([&] { convection_term(state, geo); }, reps),
       time_ms([&] { ref::convection_term(state, geo); }, reps)},
      {"laplacian", time_ms([&] { laplacian(p); }, reps),
       time_ms([&] { ref::laplacian(p); }, reps)},
  };
  std::printf("%-24s %12s %12s %8s\n", "kernel", "parallel/ms", "serial/ms",
              "speedup");
  for (const Row& r : rows)
    std::printf("%-24s %12.3f %12.3f %8.2f\n", r.name, r.parallel_ms,
                r.serial_ms, r.serial_ms / r.parallel_ms);
  return 0;
}
