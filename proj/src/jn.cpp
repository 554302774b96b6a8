#include "parabmo/jn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pbmo {

double exp_moment(const FieldView& f, const Box& box, double b, double c,
                  MomentSide side) {
  if (!(c >= 0.0)) throw ParameterError("exponential moment needs c >= 0");
  auto samples = collect_samples(*f.grid, f.values, f.defined, box);
  if (!samples)
    throw ResolutionError("moment box touches undefined samples", 0);
  const IndexBox ib = index_range(*f.grid, box);
  if (!ib.meets(kMinSamplesPerAxis))
    throw ResolutionError("moment box under-resolved", ib.count());

  std::vector<double> expo;
  expo.reserve(samples->size());
  double emax = 0.0;
  for (double u : *samples) {
    const double d = side == MomentSide::over ? u - b : b - u;
    const double e = d > 0.0 ? c * d : 0.0;
    expo.push_back(e);
    emax = std::max(emax, e);
  }
  const auto n = static_cast<long double>(expo.size());
  if (emax <= 700.0) {
    long double acc = 0.0L;
    for (double e : expo) acc += std::exp((long double)e);
    return static_cast<double>(acc / n);
  }
  // Log-sum-exp guard: log(mean) = emax + log(mean of exp(e - emax)).
  long double acc = 0.0L;
  for (double e : expo) acc += std::exp((long double)(e - emax));
  const long double logmean = (long double)emax + std::log(acc / n);
  if (logmean > 700.0L) return std::numeric_limits<double>::infinity();
  return static_cast<double>(std::exp(logmean));
}

std::vector<double> default_c_grid(double c_lo, double c_hi,
                                   std::size_t count) {
  if (!(c_lo > 0.0 && c_hi > c_lo) || count < 2)
    throw ParameterError("c grid needs 0 < c_lo < c_hi and >= 2 points");
  std::vector<double> out;
  out.reserve(count);
  const double r = std::log(c_hi / c_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(c_lo * std::exp(r * static_cast<double>(i)));
  out.back() = c_hi;
  return out;
}

JNReport jn_scan(const FieldView& f, const RectangleFamily& fam, double gamma,
                 const std::vector<double>& c_grid, double moment_cap) {
  if (c_grid.empty()) throw ConfigError("empty c grid");
  for (std::size_t i = 1; i < c_grid.size(); ++i)
    if (!(c_grid[i] > c_grid[i - 1]))
      throw ConfigError("c grid must be strictly increasing");

  const auto rects = family_rectangles(f, fam, gamma);
  if (rects.empty())
    throw ConfigError("rectangle family is empty on this grid");

  JNReport rep;
  rep.c_grid = c_grid;
  rep.moment_cap = moment_cap;
  rep.family_size = rects.size();
  rep.lower_moments.assign(c_grid.size(), 1.0);
  rep.upper_moments.assign(c_grid.size(), 1.0);
  std::vector<std::size_t> arg_lower(c_grid.size(), 0);
  std::vector<std::size_t> arg_upper(c_grid.size(), 0);

  for (std::size_t ri = 0; ri < rects.size(); ++ri) {
    const auto& r = rects[ri];
    const Box lo = r.lower_part(gamma);
    const Box hi = r.upper_part(gamma);
    auto ls = collect_samples(*f.grid, f.values, f.defined, lo);
    auto us = collect_samples(*f.grid, f.values, f.defined, hi);
    if (!ls || !us) continue;
    const OptimalConstant oc = optimal_constant(*ls, *us);
    for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
      const double lm = exp_moment(f, lo, oc.a, c_grid[ci], MomentSide::over);
      const double um = exp_moment(f, hi, oc.a, c_grid[ci], MomentSide::under);
      if (lm > rep.lower_moments[ci]) {
        rep.lower_moments[ci] = lm;
        arg_lower[ci] = ri;
      }
      if (um > rep.upper_moments[ci]) {
        rep.upper_moments[ci] = um;
        arg_upper[ci] = ri;
      }
    }
  }

  // Largest grid c where the family-wide worst moments stay within cap.
  std::size_t star = c_grid.size(); // sentinel: none pass
  for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
    if (std::max(rep.lower_moments[ci], rep.upper_moments[ci]) <= moment_cap)
      star = ci;
    else
      break;
  }
  std::size_t binding; // rectangle that caps the scan
  if (star == c_grid.size()) {
    rep.c_star = 0.0;
    rep.c_star_lower = 0.0;
    rep.c_star_upper = c_grid.front();
    binding = rep.lower_moments[0] >= rep.upper_moments[0] ? arg_lower[0]
                                                           : arg_upper[0];
  } else {
    rep.c_star = c_grid[star];
    rep.c_star_lower = star == 0 ? 0.0 : c_grid[star - 1];
    rep.c_star_upper =
        star + 1 < c_grid.size() ? c_grid[star + 1] : c_grid[star];
    const std::size_t probe = std::min(star + 1, c_grid.size() - 1);
    binding = rep.lower_moments[probe] >= rep.upper_moments[probe]
                  ? arg_lower[probe]
                  : arg_upper[probe];
  }
  rep.rectangle = rects[binding];
  {
    auto ls = collect_samples(*f.grid, f.values, f.defined,
                              rep.rectangle.lower_part(gamma));
    auto us = collect_samples(*f.grid, f.values, f.defined,
                              rep.rectangle.upper_part(gamma));
    if (ls && us) rep.b = optimal_constant(*ls, *us).a;
  }
  return rep;
}

} // namespace pbmo
