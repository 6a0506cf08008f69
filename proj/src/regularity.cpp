#include "fsilab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fsilab/parallel.hpp"
#include "fsilab/plate.hpp"

namespace fsilab {

namespace {

// Shift h must be a positive integer multiple of the grid spacing.
int shift_steps(double h, double spacing) {
  const double ratio = h / spacing;
  const int m = static_cast<int>(std::lround(ratio));
  if (m < 1 || std::abs(ratio - m) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("diff_quotient: h must be a positive multiple of the grid spacing");
  return m;
}

double lq_norm(const PlateField& g, double q) {
  double acc = 0.0;
  for (int j = 0; j < g.grid.npy(); ++j)
    for (int i = 0; i < g.grid.npx(); ++i)
      acc += std::pow(std::abs(g.at(i, j)), q) * g.grid.wq_x(i) * g.grid.wq_y(j);
  return std::pow(acc, 1.0 / q);
}

}  // namespace

void FractionalParams::validate(const Grid& g) const {
  if (!(s > 0.0 && s <= 1.0))
    throw std::invalid_argument("FractionalParams: s must lie in (0, 1]");
  if (!(q_int > 1.0))
    throw std::invalid_argument("FractionalParams: q_int must exceed 1");
  if (direction != 0 && direction != 1)
    throw std::invalid_argument("FractionalParams: direction must be 0 or 1");
  if (direction == 1 && g.ny == 0)
    throw std::invalid_argument("FractionalParams: y-direction needs a 2D plate");
  shift_steps(h, direction == 0 ? g.hx() : g.hy());
}

PlateField diff_quotient(const PlateField& g, const FractionalParams& p) {
  const Grid& grid = g.grid;
  p.validate(grid);
  const double spacing = p.direction == 0 ? grid.hx() : grid.hy();
  const int m = shift_steps(p.h, spacing);
  const double scale = 1.0 / std::pow(p.h, p.s);
  PlateField out(grid);
  if (grid.periodic()) {
    const int nx = grid.npx(), ny = grid.npy();
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int is = p.direction == 0 ? (i + m) % nx : i;
        const int js = p.direction == 1 ? (j + m) % ny : j;
        out.at(i, j) = (g.at(is, js) - g.at(i, j)) * scale;
      }
    return out;
  }
  // clamped: quotient on the inner band Gamma_h only, zero outside
  for (int j = 0; j < grid.npy(); ++j)
    for (int i = 0; i < grid.npx(); ++i) {
      const double cx = grid.x(i), cy = grid.y(j);
      const double dist =
          grid.ny == 0
              ? std::min(cx, grid.lx - cx)
              : std::min(std::min(cx, grid.lx - cx), std::min(cy, grid.ly - cy));
      if (dist <= p.h) continue;
      const int is = p.direction == 0 ? i + m : i;
      const int js = p.direction == 1 ? j + m : j;
      out.at(i, j) = (g.at(is, js) - g.at(i, j)) * scale;
    }
  return out;
}

double nikolskii_norm(const PlateField& g, double s, double q_int,
                      const std::vector<double>& h_set) {
  if (h_set.empty())
    throw std::invalid_argument("nikolskii_norm: h_set must be nonempty");
  double sup = 0.0;
  const int ndir = g.grid.ny == 0 ? 1 : 2;
  for (int dir = 0; dir < ndir; ++dir)
    for (double h : h_set) {
      FractionalParams p{s, q_int, h, dir};
      sup = std::max(sup, lq_norm(diff_quotient(g, p), q_int));
    }
  return sup + lq_norm(g, q_int);
}

double gagliardo_norm(const PlateField& g, double s, double q_int) {
  const Grid& grid = g.grid;
  const int nx = grid.npx(), ny = grid.npy();
  const int n_dim = grid.ny == 0 ? 1 : 2;
  const double power = n_dim + s * q_int;
  double acc = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double wi = grid.wq_x(i) * grid.wq_y(j);
      for (int jj = 0; jj < ny; ++jj)
        for (int ii = 0; ii < nx; ++ii) {
          double dx = std::abs(grid.x(ii) - grid.x(i));
          double dy = std::abs(grid.y(jj) - grid.y(j));
          if (grid.periodic()) {
            dx = std::min(dx, grid.lx - dx);
            if (n_dim == 2) dy = std::min(dy, grid.ly - dy);
          }
          const double dist = n_dim == 1 ? dx : std::hypot(dx, dy);
          if (dist < 1e-12) continue;  // diagonal cell
          const double diff = std::abs(g.at(ii, jj) - g.at(i, j));
          acc += std::pow(diff, q_int) / std::pow(dist, power) * wi *
                 grid.wq_x(ii) * grid.wq_y(jj);
        }
    }
  return std::pow(acc, 1.0 / q_int) + lq_norm(g, q_int);
}

double summation_by_parts_residual(const PlateField& f, const PlateField& g,
                                   double s, double h) {
  const Grid& grid = f.grid;
  require_same_grid(grid, g.grid, "summation_by_parts_residual");
  if (!grid.periodic())
    throw std::invalid_argument("summation_by_parts_residual: periodic plates only");
  const int m = shift_steps(h, grid.hx());
  const double scale = 1.0 / std::pow(h, s);
  const int nx = grid.npx(), ny = grid.npy();
  auto fwd = [&](const PlateField& a, int i, int j) {
    return (a.at((i + m) % nx, j) - a.at(i, j)) * scale;
  };
  double lhs = 0.0, rhs = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // D_{-h}^s q(y) = (q(y) - q(y-h)) / h^s, so D_{-h}^s D_h^s g is the
      // symmetric second difference and the identity telescopes exactly
      const double dgm = fwd(g, (i + nx - m) % nx, j);
      const double dgi = fwd(g, i, j);
      lhs += -f.at(i, j) * (dgi - dgm) * scale * grid.wq_x(i) * grid.wq_y(j);
      rhs += fwd(f, i, j) * dgi * grid.wq_x(i) * grid.wq_y(j);
    }
  return std::abs(lhs - rhs);
}

double threshold_s(double gamma, int d, bool alpha_positive) {
  if (d == 2) {
    if (!(gamma > 1.0))
      throw std::invalid_argument("threshold_s: d=2 needs gamma > 1");
    return alpha_positive ? std::min(0.75 - 0.5 / gamma, 0.5)
                          : std::min(0.5 - 0.5 / gamma, 0.25);
  }
  if (d == 3) {
    if (alpha_positive) {
      if (!(gamma > 1.5))
        throw std::invalid_argument("threshold_s: d=3, alpha>0 needs gamma > 3/2");
      return std::min(2.0 / 3.0 - 1.0 / gamma, 0.5);
    }
    if (!(gamma > 12.0 / 7.0))
      throw std::invalid_argument("threshold_s: d=3, alpha=0 needs gamma > 12/7");
    return std::min(7.0 / 12.0 - 1.0 / gamma, 0.25);
  }
  throw std::invalid_argument("threshold_s: d must be 2 or 3");
}

Rational threshold_s_exact(long long gamma_num, long long gamma_den, int d,
                           bool alpha_positive) {
  if (gamma_num <= 0 || gamma_den <= 0)
    throw std::invalid_argument("threshold_s_exact: gamma must be positive");
  long long a_num, a_den, b_num, b_den;
  if (d == 2) {
    if (gamma_num <= gamma_den)
      throw std::invalid_argument("threshold_s_exact: d=2 needs gamma > 1");
    if (alpha_positive) {  // 3/4 - 1/(2 gamma) vs 1/2
      a_num = 3 * gamma_num - 2 * gamma_den, a_den = 4 * gamma_num;
      b_num = 1, b_den = 2;
    } else {  // 1/2 - 1/(2 gamma) vs 1/4
      a_num = gamma_num - gamma_den, a_den = 2 * gamma_num;
      b_num = 1, b_den = 4;
    }
  } else if (d == 3) {
    if (alpha_positive) {  // 2/3 - 1/gamma vs 1/2
      if (2 * gamma_num <= 3 * gamma_den)
        throw std::invalid_argument("threshold_s_exact: d=3, alpha>0 needs gamma > 3/2");
      a_num = 2 * gamma_num - 3 * gamma_den, a_den = 3 * gamma_num;
      b_num = 1, b_den = 2;
    } else {  // 7/12 - 1/gamma vs 1/4
      if (7 * gamma_num <= 12 * gamma_den)
        throw std::invalid_argument("threshold_s_exact: d=3, alpha=0 needs gamma > 12/7");
      a_num = 7 * gamma_num - 12 * gamma_den, a_den = 12 * gamma_num;
      b_num = 1, b_den = 4;
    }
  } else {
    throw std::invalid_argument("threshold_s_exact: d must be 2 or 3");
  }
  Rational r;
  if (a_num * b_den <= b_num * a_den)
    r = {a_num, a_den};
  else
    r = {b_num, b_den};
  const long long g = std::gcd(r.num, r.den);
  if (g > 1) r.num /= g, r.den /= g;
  return r;
}

RegularityScanReport regularity_scan(const std::vector<PlateField>& w_trajectory,
                                     const std::vector<double>& times,
                                     const std::vector<double>& s_grid,
                                     std::vector<double> h_decades,
                                     double ratio_bound) {
  if (w_trajectory.empty() || w_trajectory.size() != times.size())
    throw std::invalid_argument("regularity_scan: trajectory/times size mismatch");
  const Grid& grid = w_trajectory.front().grid;
  if (!grid.periodic())
    throw std::invalid_argument("regularity_scan: periodic plates only");
  if (h_decades.empty())
    for (int k = 0; k < 5; ++k) h_decades.push_back((1 << k) * grid.hx());
  std::sort(h_decades.begin(), h_decades.end());

  const std::size_t n_snap = w_trajectory.size();
  std::vector<PlateField> lap(n_snap);
  std::vector<double> tw(n_snap, 1.0);  // nonuniform trapezoid time weights
  for (std::size_t m = 0; m < n_snap; ++m) lap[m] = laplacian(w_trajectory[m]);
  if (n_snap > 1)
    for (std::size_t m = 0; m < n_snap; ++m) {
      const double left = m == 0 ? times[0] : times[m - 1];
      const double right = m + 1 == n_snap ? times[m] : times[m + 1];
      tw[m] = 0.5 * (right - left);
    }

  RegularityScanReport rep;
  rep.s_grid = s_grid;
  rep.h_decades = h_decades;
  rep.ratio_bound = ratio_bound;
  rep.norms.assign(s_grid.size(), std::vector<double>(h_decades.size(), 0.0));
  rep.quartic.assign(s_grid.size(), std::vector<double>(h_decades.size(), 0.0));
  rep.ratio.assign(s_grid.size(), 0.0);

  const int n_pairs = static_cast<int>(s_grid.size() * h_decades.size());
  FSILAB_OMP_FOR
  for (int p = 0; p < n_pairs; ++p) {
    const std::size_t si = static_cast<std::size_t>(p) / h_decades.size();
    const std::size_t hi = static_cast<std::size_t>(p) % h_decades.size();
    double i2 = 0.0, i4 = 0.0;
    for (std::size_t m = 0; m < n_snap; ++m) {
      PlateField d2 = diff_quotient(lap[m], {s_grid[si], 2.0, h_decades[hi], 0});
      PlateField d4 = diff_quotient(lap[m], {0.5 * s_grid[si], 4.0, h_decades[hi], 0});
      double a2 = 0.0, a4 = 0.0;
      for (int i = 0; i < d2.size(); ++i) {
        const double wq = grid.wq_x(i % grid.npx()) * grid.wq_y(i / grid.npx());
        a2 += d2(i) * d2(i) * wq;
        a4 += std::pow(d4(i), 4) * wq;
      }
      i2 += tw[m] * a2;
      i4 += tw[m] * a4;
    }
    rep.norms[si][hi] = i2;
    rep.quartic[si][hi] = i4;
  }

  for (std::size_t si = 0; si < s_grid.size(); ++si) {
    const double ref = rep.norms[si].back();  // coarsest shift
    const double peak = *std::max_element(rep.norms[si].begin(), rep.norms[si].end());
    if (peak <= 0.0)
      rep.ratio[si] = 0.0;
    else
      rep.ratio[si] = ref > 0.0 ? peak / ref : std::numeric_limits<double>::infinity();
    if (rep.ratio[si] <= ratio_bound &&
        (rep.empirical_threshold < 0.0 || s_grid[si] > rep.empirical_threshold))
      rep.empirical_threshold = s_grid[si];
  }
  return rep;
}

}  // namespace fsilab
