#pragma once

// Independent reference implementations used to cross-check the fast
// paths in the library. Everything here is deliberately written as plain
// loops over raw samples.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "parabmo/field.hpp"

namespace oracles {

using namespace pbmo;

inline GridSpec unit_grid(std::size_t nx, std::size_t nt, double xlo = 0.0,
                          double xhi = 1.0, double tlo = -1.0,
                          double thi = 1.0) {
  Box b;
  b.space.push_back({xlo, xhi});
  b.time = {tlo, thi};
  return GridSpec(Cylinder{b}, {nx}, nt);
}

inline GridSpec unit_grid2(std::size_t nx, std::size_t ny, std::size_t nt) {
  Box b;
  b.space.push_back({0.0, 1.0});
  b.space.push_back({0.0, 1.0});
  b.time = {-1.0, 1.0};
  return GridSpec(Cylinder{b}, {nx, ny}, nt);
}

// Direct-loop mean of the selected part over the index box.
inline double direct_mean(const SampledField& f, const IndexBox& ib,
                          Part part) {
  const GridSpec& g = f.grid();
  const std::size_t n = g.dim();
  const std::size_t sx = g.spatial_count();
  long double sum = 0.0L;
  std::size_t count = 0;
  std::vector<std::size_t> idx(n);
  const std::size_t per_slice = ib.spatial_count();
  for (std::size_t t = ib.t_lo; t < ib.t_hi && per_slice > 0; ++t) {
    for (std::size_t a = 0; a < n; ++a) idx[a] = ib.lo[a];
    for (std::size_t visited = 0; visited < per_slice; ++visited) {
      std::size_t s = 0;
      for (std::size_t a = 0; a < n; ++a) s = s * g.nx[a] + idx[a];
      const double v = f.values()[t * sx + s];
      switch (part) {
      case Part::full: sum += v; break;
      case Part::positive: sum += v > 0.0 ? v : 0.0; break;
      case Part::negative: sum += v < 0.0 ? -v : 0.0; break;
      }
      ++count;
      for (std::size_t a = n; a-- > 0;) {
        if (++idx[a] < ib.hi[a]) break;
        idx[a] = ib.lo[a];
      }
    }
  }
  return static_cast<double>(sum / static_cast<long double>(count));
}

// Dense scan of the piecewise-linear objective minimized by
// optimal_constant.
inline double objective(const std::vector<double>& lo,
                        const std::vector<double>& up, double a) {
  long double l = 0.0L, u = 0.0L;
  for (double v : lo)
    if (v > a) l += v - a;
  for (double v : up)
    if (v < a) u += a - v;
  return static_cast<double>(l / lo.size() + u / up.size());
}

inline double dense_scan_min(const std::vector<double>& lo,
                             const std::vector<double>& up,
                             std::size_t steps = 4000) {
  double amin = *std::min_element(lo.begin(), lo.end());
  double amax = *std::max_element(up.begin(), up.end());
  amin = std::min(amin, *std::min_element(up.begin(), up.end())) - 1.0;
  amax = std::max(amax, *std::max_element(lo.begin(), lo.end())) + 1.0;
  double best = objective(lo, up, amin);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double a =
        amin + (amax - amin) * static_cast<double>(i) / double(steps);
    best = std::min(best, objective(lo, up, a));
  }
  // Also probe all breakpoints: the true minimum sits at one of them.
  for (double a : lo) best = std::min(best, objective(lo, up, a));
  for (double a : up) best = std::min(best, objective(lo, up, a));
  return best;
}

// Quadratic-loop double oscillation.
inline double quadratic_pair_mean(const std::vector<double>& xs,
                                  const std::vector<double>& ys) {
  long double total = 0.0L;
  for (double x : xs)
    for (double y : ys)
      if (x > y) total += x - y;
  return static_cast<double>(total /
                             ((long double)xs.size() * (long double)ys.size()));
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

} // namespace oracles
