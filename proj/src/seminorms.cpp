#include "parabmo/seminorms.hpp"

#include <algorithm>
#include <cmath>

namespace pbmo {

namespace {

long double sum_over(std::span<const double> xs) {
  long double s = 0.0L;
  for (double x : xs) s += x;
  return s;
}

// mean_lower (u-a)^+ + mean_upper (a-u)^+ at a fixed a, on sorted inputs.
double objective_at(std::span<const double> lower_sorted,
                    std::span<const double> upper_sorted, double a) {
  long double lo_term = 0.0L;
  {
    auto it = std::upper_bound(lower_sorted.begin(), lower_sorted.end(), a);
    const std::size_t k = static_cast<std::size_t>(lower_sorted.end() - it);
    long double s = 0.0L;
    for (auto p = it; p != lower_sorted.end(); ++p) s += *p - (long double)a;
    lo_term = s / static_cast<long double>(lower_sorted.size());
    (void)k;
  }
  long double up_term = 0.0L;
  {
    auto it = std::lower_bound(upper_sorted.begin(), upper_sorted.end(), a);
    long double s = 0.0L;
    for (auto p = upper_sorted.begin(); p != it; ++p) s += (long double)a - *p;
    up_term = s / static_cast<long double>(upper_sorted.size());
  }
  return static_cast<double>(lo_term + up_term);
}

} // namespace

OptimalConstant optimal_constant(std::span<const double> lower_samples,
                                 std::span<const double> upper_samples) {
  if (lower_samples.empty() || upper_samples.empty())
    throw ParameterError("optimal_constant needs nonempty sample multisets");
  std::vector<double> lo(lower_samples.begin(), lower_samples.end());
  std::vector<double> up(upper_samples.begin(), upper_samples.end());
  std::sort(lo.begin(), lo.end());
  std::sort(up.begin(), up.end());

  // Breakpoint candidates: all sample values, ascending.
  std::vector<double> cand;
  cand.reserve(lo.size() + up.size());
  std::merge(lo.begin(), lo.end(), up.begin(), up.end(),
             std::back_inserter(cand));
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  const long double nl = static_cast<long double>(lo.size());
  const long double nu = static_cast<long double>(up.size());

  // Leftmost candidate where the right-derivative of g becomes >= 0:
  // g'(a+) = #\{upper <= a\}/nu - #\{lower > a\}/nl.
  double best = cand.back();
  for (double a : cand) {
    const auto gt =
        lo.end() - std::upper_bound(lo.begin(), lo.end(), a); // lower > a
    const auto le =
        std::upper_bound(up.begin(), up.end(), a) - up.begin(); // upper <= a
    const long double deriv = static_cast<long double>(le) / nu -
                              static_cast<long double>(gt) / nl;
    if (deriv >= 0.0L) {
      best = a;
      break;
    }
  }
  return {best, objective_at(lo, up, best)};
}

std::vector<ParabolicRectangle>
family_rectangles(const FieldView& f, const RectangleFamily& fam,
                  double gamma) {
  if (fam.ladder.empty())
    throw ConfigError("rectangle family has an empty ladder");
  const GridSpec& g = *f.grid;
  const std::size_t n = g.dim();
  if (fam.stride.size() != n)
    throw ConfigError("family stride does not match grid dimension");
  double hmin = g.time_spacing();
  for (std::size_t a = 0; a < n; ++a) hmin = std::min(hmin, g.spacing(a));
  const double tol = 1e-9 * hmin;

  std::vector<ParabolicRectangle> out;
  std::vector<double> cx(n);
  std::vector<std::size_t> idx(n);
  for (double ell : fam.ladder) {
    for (std::size_t t = 0; t < g.nt; t += fam.tstride) {
      const double ct = g.time_coord(t);
      for (std::size_t a = 0; a < n; ++a) idx[a] = 0;
      while (true) {
        for (std::size_t a = 0; a < n; ++a) cx[a] = g.coord(a, idx[a]);
        ParabolicRectangle r(cx, ct, ell, fam.p);
        if (g.domain.contains(r.full_box(), tol)) {
          const IndexBox lo = index_range(g, r.lower_part(gamma));
          const IndexBox hi = index_range(g, r.upper_part(gamma));
          if (lo.meets(kMinSamplesPerAxis) && hi.meets(kMinSamplesPerAxis)) {
            bool ok = true;
            if (!f.defined.empty()) {
              ok = collect_samples(g, f.values, f.defined, r.lower_part(gamma))
                       .has_value() &&
                   collect_samples(g, f.values, f.defined, r.upper_part(gamma))
                       .has_value();
            }
            if (ok) out.push_back(r);
          }
        }
        std::size_t a = n;
        bool done = true;
        while (a-- > 0) {
          idx[a] += fam.stride[a];
          if (idx[a] < g.nx[a]) {
            done = false;
            break;
          }
          idx[a] = 0;
        }
        if (done) break;
      }
    }
  }
  return out;
}

namespace {

bool lex_better(double value, const ParabolicRectangle& r,
                const SeminormEstimate& best) {
  if (!best.witness) return true;
  if (value != best.value) return value > best.value;
  const ParabolicRectangle& w = *best.witness;
  if (r.center_t != w.center_t) return r.center_t > w.center_t;
  for (std::size_t a = 0; a < r.center_x.size(); ++a)
    if (r.center_x[a] != w.center_x[a]) return r.center_x[a] > w.center_x[a];
  return r.ell > w.ell;
}

} // namespace

SeminormEstimate pbmo_seminorm(const FieldView& f, const RectangleFamily& fam,
                               PbmoDirection direction, double gamma) {
  if (direction == PbmoDirection::plus) {
    // PBMO^+ is PBMO^- with the time axis reversed.
    const GridSpec& g = *f.grid;
    const std::size_t sx = g.spatial_count();
    std::vector<double> rev(f.values.size());
    std::vector<std::uint8_t> revmask;
    for (std::size_t t = 0; t < g.nt; ++t)
      for (std::size_t s = 0; s < sx; ++s)
        rev[t * sx + s] = f.values[(g.nt - 1 - t) * sx + s];
    if (!f.defined.empty()) {
      revmask.resize(f.defined.size());
      for (std::size_t t = 0; t < g.nt; ++t)
        for (std::size_t s = 0; s < sx; ++s)
          revmask[t * sx + s] = f.defined[(g.nt - 1 - t) * sx + s];
    }
    FieldView rv{&g, rev, revmask};
    return pbmo_seminorm(rv, fam, PbmoDirection::minus, gamma);
  }

  const auto rects = family_rectangles(f, fam, gamma);
  if (rects.empty())
    throw ConfigError("rectangle family is empty on this grid");
  SeminormEstimate best;
  best.family_size = rects.size();
  for (const auto& r : rects) {
    auto lo = collect_samples(*f.grid, f.values, f.defined, r.lower_part(gamma));
    auto hi = collect_samples(*f.grid, f.values, f.defined, r.upper_part(gamma));
    if (!lo || !hi) continue;
    const OptimalConstant oc = optimal_constant(*lo, *hi);
    if (lex_better(oc.value, r, best)) {
      best.value = oc.value;
      best.witness = r;
      best.constant = oc.a;
    }
  }
  return best;
}

SeminormEstimate bmo_variant_seminorm(const FieldView& f,
                                      const RectangleFamily& fam, double gamma,
                                      double lag, BmoVariantSide side) {
  ShapeParams shape(gamma, lag); // validates lag > 1 - gamma
  (void)shape;
  const auto rects = family_rectangles(f, fam, gamma);
  if (rects.empty())
    throw ConfigError("rectangle family is empty on this grid");
  const GridSpec& g = *f.grid;
  double hmin = g.time_spacing();
  for (std::size_t a = 0; a < g.dim(); ++a) hmin = std::min(hmin, g.spacing(a));
  const double tol = 1e-9 * hmin;

  SeminormEstimate best;
  for (const auto& r : rects) {
    const Box base = r.lower_part(gamma);
    const Box shifted = translate_time(base, lag * r.time_half());
    if (!g.domain.contains(shifted, tol)) continue; // skipped, per contract
    const IndexBox sib = index_range(g, shifted);
    if (!sib.meets(kMinSamplesPerAxis)) continue;
    auto bs = collect_samples(g, f.values, f.defined, base);
    auto ss = collect_samples(g, f.values, f.defined, shifted);
    if (!bs || !ss) continue;
    ++best.family_size;

    long double value = 0.0L;
    double companion = 0.0;
    if (side == BmoVariantSide::plus) {
      const long double m =
          sum_over(*ss) / static_cast<long double>(ss->size());
      companion = static_cast<double>(m);
      long double acc = 0.0L;
      for (double v : *bs) {
        const long double d = (long double)v - m;
        if (d > 0.0L) acc += d;
      }
      value = acc / static_cast<long double>(bs->size());
    } else {
      const long double m =
          sum_over(*bs) / static_cast<long double>(bs->size());
      companion = static_cast<double>(m);
      long double acc = 0.0L;
      for (double v : *ss) {
        const long double d = m - (long double)v;
        if (d > 0.0L) acc += d;
      }
      value = acc / static_cast<long double>(ss->size());
    }
    const double dv = static_cast<double>(value);
    if (lex_better(dv, r, best)) {
      best.value = dv;
      best.witness = r;
      best.constant = companion;
    }
  }
  if (best.family_size == 0)
    throw ConfigError("no rectangle of the family admits the shifted box");
  return best;
}

double double_oscillation(const FieldView& f, const Box& a, const Box& b) {
  const double gap = b.time.lo - a.time.hi;
  if (!(gap > 0.0))
    throw OrderError("double_oscillation requires A to end before B starts");
  auto as = collect_samples(*f.grid, f.values, f.defined, a);
  auto bs = collect_samples(*f.grid, f.values, f.defined, b);
  if (!as || !bs)
    throw ResolutionError("box touches undefined samples", 0);
  const IndexBox ia = index_range(*f.grid, a);
  const IndexBox ib = index_range(*f.grid, b);
  if (!ia.meets(kMinSamplesPerAxis))
    throw ResolutionError("first box under-resolved", ia.count());
  if (!ib.meets(kMinSamplesPerAxis))
    throw ResolutionError("second box under-resolved", ib.count());

  // mean over pairs of (x - y)^+ via sorted B and prefix sums: O(m log m).
  std::vector<double> ys(bs->begin(), bs->end());
  std::sort(ys.begin(), ys.end());
  std::vector<long double> pre(ys.size() + 1, 0.0L);
  for (std::size_t i = 0; i < ys.size(); ++i) pre[i + 1] = pre[i] + ys[i];

  long double total = 0.0L;
  for (double x : *as) {
    const auto it = std::lower_bound(ys.begin(), ys.end(), x); // y < x
    const std::size_t k = static_cast<std::size_t>(it - ys.begin());
    total += (long double)x * k - pre[k];
  }
  const long double pairs = static_cast<long double>(as->size()) *
                            static_cast<long double>(bs->size());
  return static_cast<double>(total / pairs);
}

} // namespace pbmo
