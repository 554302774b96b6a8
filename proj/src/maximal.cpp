#include "parabmo/maximal.hpp"

#include <algorithm>

namespace pbmo {

std::vector<double> ladder_of(const MaximalConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
    throw ParameterError("maximal config gamma must lie in (0,1)");
  if (!(cfg.ell_min > 0.0) || !(cfg.ell_max >= cfg.ell_min))
    throw ParameterError("maximal config requires 0 < ell_min <= ell_max");
  if (!(cfg.ladder_ratio > 1.0))
    throw ParameterError("ladder_ratio must exceed 1");
  std::vector<double> out;
  const double cap = cfg.ell_max * (1.0 + 1e-12);
  for (double ell = cfg.ell_min; ell <= cap; ell *= cfg.ladder_ratio)
    out.push_back(ell);
  return out;
}

namespace {

// One supremum evaluation mode per operator variant.
enum class Mode { star_backward, star_forward, plain, future_negative };

PointField evaluate(const SampledField& f, const MaximalConfig& cfg,
                    const std::vector<double>& ladder, Mode mode,
                    Exponent p) {
  const GridSpec& g = f.grid();
  if (ladder.empty())
    throw ConfigError("empty side-length ladder");
  const std::size_t n = g.dim();
  const std::size_t sx = g.spatial_count();
  double hmin = g.time_spacing();
  for (std::size_t a = 0; a < n; ++a) hmin = std::min(hmin, g.spacing(a));
  const double tol = 1e-9 * hmin;

  PointField out;
  out.grid = g;
  out.values.assign(g.point_count(), 0.0);
  out.defined.assign(g.point_count(), 0);

  std::vector<double> cx(n);
  std::vector<std::size_t> idx(n, 0);
  bool any_defined = false;
  for (std::size_t s = 0; s < sx; ++s) {
    for (std::size_t a = 0; a < n; ++a) cx[a] = g.coord(a, idx[a]);
    for (std::size_t t = 0; t < g.nt; ++t) {
      const double ct = g.time_coord(t);
      double best = 0.0;
      bool have = false;
      for (double ell : ladder) {
        ParabolicRectangle r(cx, ct, ell, p);
        if (!g.domain.contains(r.full_box(), tol)) continue;
        const IndexBox lo = index_range(g, r.lower_part(cfg.gamma));
        const IndexBox hi = index_range(g, r.upper_part(cfg.gamma));
        if (!lo.meets(kMinSamplesPerAxis) || !hi.meets(kMinSamplesPerAxis))
          continue;
        double v = 0.0;
        switch (mode) {
        case Mode::star_backward:
          v = f.index_box_mean(lo, Part::positive) +
              f.index_box_mean(hi, Part::negative);
          break;
        case Mode::star_forward:
          v = f.index_box_mean(hi, Part::positive) +
              f.index_box_mean(lo, Part::negative);
          break;
        case Mode::plain:
          v = f.index_box_mean(lo, Part::positive) +
              f.index_box_mean(lo, Part::negative);
          break;
        case Mode::future_negative:
          v = f.index_box_mean(hi, Part::negative);
          break;
        }
        if (!have || v > best) best = v;
        have = true;
      }
      const std::size_t flat = t * sx + s;
      if (have) {
        out.values[flat] = best;
        out.defined[flat] = 1;
        any_defined = true;
      }
    }
    for (std::size_t a = n; a-- > 0;) {
      if (++idx[a] < g.nx[a]) break;
      idx[a] = 0;
    }
  }
  if (!any_defined)
    throw ConfigError("no lattice point admits any ladder rectangle");
  return out;
}

Exponent default_p() { return Exponent(2.0); }

} // namespace

PointField maximal_star(const SampledField& f, const MaximalConfig& cfg) {
  const auto ladder = ladder_of(cfg);
  if (cfg.direction == Direction::forward) {
    // M_*^{gamma+} f = M_*^{gamma-}(-f).
    MaximalConfig back = cfg;
    back.direction = Direction::backward;
    return maximal_star(f.negate(), back);
  }
  return evaluate(f, cfg, ladder, Mode::star_backward, default_p());
}

PointField maximal_plain(const SampledField& f, const MaximalConfig& cfg) {
  return evaluate(f, cfg, ladder_of(cfg), Mode::plain, default_p());
}

PointField maximal_future_negative(const SampledField& f,
                                   const MaximalConfig& cfg) {
  return evaluate(f, cfg, ladder_of(cfg), Mode::future_negative, default_p());
}

DeviationReport duality_check(const SampledField& f,
                              const MaximalConfig& cfg) {
  const auto ladder = ladder_of(cfg);
  const PointField forward =
      evaluate(f, cfg, ladder, Mode::star_forward, default_p());
  const PointField via_duality =
      evaluate(f.negate(), cfg, ladder, Mode::star_backward, default_p());
  DeviationReport rep;
  for (std::size_t i = 0; i < forward.values.size(); ++i) {
    if (!forward.defined[i] || !via_duality.defined[i]) continue;
    rep.max_abs_deviation = std::max(
        rep.max_abs_deviation,
        std::abs(forward.values[i] - via_duality.values[i]));
    ++rep.compared;
  }
  rep.undefined_count = forward.undefined_count();
  return rep;
}

std::pair<PointField, PointField> split(const SampledField& f,
                                        const MaximalConfig& cfg,
                                        const SplitCutoff& cut) {
  const auto ladder = ladder_of(cfg);
  const double pivot = cut.cutoff_factor * cut.reference_ell;
  std::vector<double> small, large;
  for (double ell : ladder) {
    if (ell <= pivot * (1.0 + 1e-12)) small.push_back(ell);
    if (ell >= pivot * (1.0 - 1e-12)) large.push_back(ell);
  }
  if (small.empty() && large.empty())
    throw ConfigError("both sub-ladders of the split are empty");
  auto eval_or_empty = [&](const std::vector<double>& lad) {
    if (!lad.empty())
      return evaluate(f, cfg, lad, Mode::star_backward, default_p());
    PointField e;
    e.grid = f.grid();
    e.values.assign(f.grid().point_count(), 0.0);
    e.defined.assign(f.grid().point_count(), 0);
    return e;
  };
  return {eval_or_empty(small), eval_or_empty(large)};
}

DeviationReport hl_reduction_check(const SampledField& f,
                                   const MaximalConfig& cfg) {
  const GridSpec& g = f.grid();
  const std::size_t sx = g.spatial_count();
  // The caller promises f(x,t) = g(x); verify bitwise.
  for (std::size_t t = 1; t < g.nt; ++t)
    for (std::size_t s = 0; s < sx; ++s)
      if (f.values()[t * sx + s] != f.values()[s])
        throw ParameterError("hl_reduction_check needs a time-independent field");

  const auto ladder = ladder_of(cfg);
  const PointField star =
      evaluate(f, cfg, ladder, Mode::star_backward, default_p());
  const std::size_t n = g.dim();
  double hmin = g.time_spacing();
  for (std::size_t a = 0; a < n; ++a) hmin = std::min(hmin, g.spacing(a));
  const double tol = 1e-9 * hmin;
  const std::size_t slice = g.nt / 2;
  const double ct = g.time_coord(slice);

  DeviationReport rep;
  std::vector<double> cx(n);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t s = 0; s < sx; ++s) {
    for (std::size_t a = 0; a < n; ++a) cx[a] = g.coord(a, idx[a]);
    // Only points whose full ladder fits take part in the comparison.
    bool all_fit = true;
    double hl = 0.0;
    bool have = false;
    for (double ell : ladder) {
      ParabolicRectangle r(cx, ct, ell, default_p());
      if (!g.domain.contains(r.full_box(), tol)) {
        all_fit = false;
        break;
      }
      const IndexBox lo = index_range(g, r.lower_part(cfg.gamma));
      const IndexBox hi = index_range(g, r.upper_part(cfg.gamma));
      if (!lo.meets(kMinSamplesPerAxis) || !hi.meets(kMinSamplesPerAxis)) {
        all_fit = false;
        break;
      }
      // Centred spatial cube average of |g| = g^+ + g^-, on one slice.
      const double v = f.slice_mean(Part::positive, slice, lo) +
                       f.slice_mean(Part::negative, slice, lo);
      if (!have || v > hl) hl = v;
      have = true;
    }
    const std::size_t flat = slice * sx + s;
    if (all_fit && have && star.defined[flat]) {
      rep.max_abs_deviation = std::max(
          rep.max_abs_deviation, std::abs(star.values[flat] - hl));
      ++rep.compared;
    }
    for (std::size_t a = n; a-- > 0;) {
      if (++idx[a] < g.nx[a]) break;
      idx[a] = 0;
    }
  }
  rep.undefined_count = star.undefined_count();
  return rep;
}

} // namespace pbmo
