#include "parabmo/chains.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace pbmo {

namespace {

constexpr double kFeasibilityC0 = 4.0;
constexpr std::size_t kMaxSubchains = 4096;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Box cube_at(std::span<const double> c, double side, const Interval& time) {
  Box b;
  b.space.reserve(c.size());
  for (double x : c) b.space.push_back({x - 0.5 * side, x + 0.5 * side});
  b.time = time;
  return b;
}

// mean over A x B of (f(x) - f(y))^+ without the temporal-order demand;
// used for the overlap-to-next-block terms where S_i sits inside P_{i+1}.
double pair_mean(const FieldView& f, const Box& a, const Box& b) {
  auto as = collect_samples(*f.grid, f.values, f.defined, a);
  auto bs = collect_samples(*f.grid, f.values, f.defined, b);
  if (!as || !bs) throw ResolutionError("chain box touches undefined samples", 0);
  if (as->empty() || bs->empty())
    throw ResolutionError("chain box holds no samples", 0);
  std::vector<double> ys(bs->begin(), bs->end());
  std::sort(ys.begin(), ys.end());
  std::vector<long double> pre(ys.size() + 1, 0.0L);
  for (std::size_t i = 0; i < ys.size(); ++i) pre[i + 1] = pre[i] + ys[i];
  long double total = 0.0L;
  for (double x : *as) {
    const auto it = std::lower_bound(ys.begin(), ys.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - ys.begin());
    total += (long double)x * k - pre[k];
  }
  return static_cast<double>(total / ((long double)as->size() *
                                      (long double)bs->size()));
}

// Direct chain: uniform block spacing ds = tau ell^p / (B-1) with
// tau/(B-1) near 1+theta, so every forward companion P_i + (1+theta)ell^p
// overlaps the next block.
Chain build_direct(const ChainSpec& spec, const Cylinder& domain,
                   bool allow_refine);

Chain build_refined(const ChainSpec& spec, const Cylinder& domain) {
  const double ell = spec.ell;
  const double tp = std::pow(ell, spec.p.value);
  const double gap = (spec.tau - spec.theta) * tp;
  if (!(gap > 0.0))
    throw OrderError("refined chain needs tau > theta");
  const double vlen = norm2(spec.v);
  const double n = static_cast<double>(spec.center_x.size());
  const double budget =
      (spec.tau - spec.theta) * ell /
      (kFeasibilityC0 * (vlen + std::sqrt(n) * ell));
  const double target_eps = std::pow(budget, 1.0 / (spec.p.value - 1.0));
  int m = 1;
  while (std::ldexp(1.0, -m) > target_eps && m < 20) ++m;
  const double eps = std::ldexp(1.0, -m);
  if (eps > target_eps)
    throw DomainError("chain geometry infeasible even after refinement");

  Chain chain;
  chain.theta = spec.theta;
  chain.epsilon = eps;
  chain.block_time_half = std::pow(eps * ell, spec.p.value);

  ParabolicRectangle r(spec.center_x, spec.center_t, ell, spec.p);
  chain.start = r.lower_part(spec.theta);
  chain.target = chain.start;
  for (std::size_t a = 0; a < chain.target.space.size(); ++a) {
    chain.target.space[a].lo += spec.v[a];
    chain.target.space[a].hi += spec.v[a];
  }
  chain.target.time = chain.target.time.translated(spec.tau * tp);

  // Tile the start: (1/eps)^n spatial cubes of side eps*ell, N_t slabs.
  const auto per_axis = static_cast<std::size_t>(std::round(1.0 / eps));
  const double sub_tp = chain.block_time_half;
  const double height = spec.theta * tp;
  const auto nt = static_cast<std::size_t>(std::ceil(height / (spec.theta * sub_tp)));
  const double slab = height / static_cast<double>(nt);
  const double theta_sub = slab / sub_tp; // slab = theta_sub * (eps ell)^p
  if (!(theta_sub > 0.0 && theta_sub < 1.0))
    throw Error("refined slab height left (0,1) in theta units");

  const std::size_t dim = spec.center_x.size();
  std::size_t spatial_tiles = 1;
  for (std::size_t a = 0; a < dim; ++a) spatial_tiles *= per_axis;
  const std::size_t tiles = spatial_tiles * nt;
  if (tiles * tiles > kMaxSubchains)
    throw ConfigError("refinement would produce too many tile pairs");

  auto tile_boxes = [&](const Box& whole) {
    std::vector<Box> out;
    out.reserve(tiles);
    std::vector<std::size_t> ix(dim, 0);
    for (std::size_t s = 0; s < spatial_tiles; ++s) {
      Box b;
      b.space.reserve(dim);
      for (std::size_t a = 0; a < dim; ++a) {
        const double lo = whole.space[a].lo;
        const double w = whole.space[a].length();
        const double frac = w / static_cast<double>(per_axis);
        b.space.push_back({lo + frac * static_cast<double>(ix[a]),
                           lo + frac * static_cast<double>(ix[a] + 1)});
      }
      for (std::size_t t = 0; t < nt; ++t) {
        b.time = {whole.time.lo + slab * static_cast<double>(t),
                  whole.time.lo + slab * static_cast<double>(t + 1)};
        out.push_back(b);
      }
      for (std::size_t a = dim; a-- > 0;) {
        if (++ix[a] < per_axis) break;
        ix[a] = 0;
      }
    }
    return out;
  };
  chain.start_tiles = tile_boxes(chain.start);
  chain.target_tiles = tile_boxes(chain.target);

  for (const auto& ta : chain.start_tiles) {
    for (const auto& tb : chain.target_tiles) {
      ChainSpec sub;
      sub.p = spec.p;
      sub.ell = eps * ell;
      sub.theta = theta_sub;
      sub.center_x.resize(dim);
      sub.v.resize(dim);
      for (std::size_t a = 0; a < dim; ++a) {
        sub.center_x[a] = 0.5 * (ta.space[a].lo + ta.space[a].hi);
        sub.v[a] = 0.5 * (tb.space[a].lo + tb.space[a].hi) - sub.center_x[a];
      }
      // Place the rectangle so its lower theta_sub-part is exactly ta.
      sub.center_t = ta.time.hi + (1.0 - theta_sub) * sub_tp;
      sub.tau = (tb.time.lo - ta.time.lo) / sub_tp;
      chain.subchains.push_back(build_direct(sub, domain, false));
    }
  }
  return chain;
}

Chain build_direct(const ChainSpec& spec, const Cylinder& domain,
                   bool allow_refine) {
  if (spec.center_x.size() != spec.v.size() ||
      spec.center_x.size() != domain.dim())
    throw ParameterError("chain spec dimension mismatch");
  if (!(spec.theta > 0.0 && spec.theta < 1.0))
    throw ParameterError("chain theta must lie in (0,1)");
  if (!(spec.tau > 1.0 - spec.theta))
    throw ParameterError("chain needs tau > 1 - theta");
  if (!(spec.ell > 0.0))
    throw ParameterError("chain needs positive side length");

  const double ell = spec.ell;
  const double tp = std::pow(ell, spec.p.value);
  const double theta = spec.theta;
  const double tau = spec.tau;

  ParabolicRectangle r(spec.center_x, spec.center_t, ell, spec.p);
  const Box start = r.lower_part(theta);
  Box target = start;
  for (std::size_t a = 0; a < target.space.size(); ++a) {
    target.space[a].lo += spec.v[a];
    target.space[a].hi += spec.v[a];
  }
  target.time = target.time.translated(tau * tp);
  if (!(target.time.lo >= start.time.lo))
    throw OrderError("chain target must not precede the start");
  if (!domain.contains(start, 0.0) || !domain.contains(target, 0.0))
    throw DomainError("chain endpoints leave the cylinder");

  const double vlen = norm2(spec.v);
  const double vinf = norm_inf(spec.v);
  if (allow_refine && vlen > 0.0 && tau * ell < kFeasibilityC0 * vlen)
    return build_refined(spec, domain);

  Chain chain;
  chain.start = start;
  chain.target = target;
  chain.theta = theta;
  chain.block_time_half = tp;

  // Spatial walk: k steps of at most half a side each, overlap fraction
  // delta = prod_a (1 - |v_a| / (k ell)).
  std::size_t k = 0;
  double delta = 0.5;
  if (vinf > 0.0) {
    k = static_cast<std::size_t>(std::ceil(vinf / (0.5 * ell)));
    if (k == 0) k = 1;
    delta = 1.0;
    for (double va : spec.v)
      delta *= 1.0 - std::abs(va) / (static_cast<double>(k) * ell);
    if (!(delta > 0.0)) throw Error("chain spatial overlap vanished");
  }
  chain.k = k;
  chain.delta = delta;

  // Number of temporal steps: tau/(steps) as close to 1+theta as possible
  // within (1, 1+2*theta) so companions overlap the next block; at least
  // max(k, 1) steps so the spatial walk fits.
  const std::size_t min_steps = std::max<std::size_t>(k, 1);
  std::size_t steps = 0;
  double best_gap = 0.0;
  const auto lo_s = static_cast<std::size_t>(std::ceil(tau / (1.0 + 2.0 * theta)));
  const auto hi_s = static_cast<std::size_t>(std::floor(tau / 1.0));
  for (std::size_t s = std::max(min_steps, std::max<std::size_t>(lo_s, 1));
       s <= std::max(hi_s, min_steps); ++s) {
    const double spacing = tau / static_cast<double>(s);
    if (!(spacing > 1.0 && spacing < 1.0 + 2.0 * theta)) continue;
    const double gap = std::abs(spacing - (1.0 + theta));
    if (steps == 0 || gap < best_gap) {
      steps = s;
      best_gap = gap;
    }
  }
  if (steps == 0) {
    // No companion schedule fits (short chains): fall back to the direct
    // two-block bound, which is the oscillation itself.
    if (k > 0)
      throw DomainError("no block schedule lands on the chain target");
    if (!(target.time.lo > start.time.hi))
      throw OrderError("start and target overlap in time");
    chain.blocks = {start, target};
    chain.l = 0;
    return chain;
  }
  chain.l = steps - k;

  const std::size_t nblocks = steps + 1;
  chain.blocks.reserve(nblocks);
  const double height = theta * tp;
  for (std::size_t i = 0; i < nblocks; ++i) {
    const double sfrac =
        k == 0 ? 0.0
               : static_cast<double>(std::min(i, k)) / static_cast<double>(k);
    std::vector<double> c(spec.center_x.size());
    for (std::size_t a = 0; a < c.size(); ++a)
      c[a] = 0.5 * (start.space[a].lo + start.space[a].hi) +
             spec.v[a] * sfrac;
    const double tfrac =
        static_cast<double>(i) / static_cast<double>(steps);
    const double t0 = start.time.lo + tau * tp * tfrac;
    Box blk = cube_at(c, ell, {t0, t0 + height});
    if (!domain.contains(blk, 0.0))
      throw DomainError("chain block leaves the cylinder");
    chain.blocks.push_back(std::move(blk));
  }

  chain.overlaps.reserve(nblocks - 1);
  for (std::size_t i = 0; i + 1 < nblocks; ++i) {
    const Box companion =
        translate_time(chain.blocks[i], (1.0 + theta) * tp);
    const Box s = intersect(companion, chain.blocks[i + 1]);
    if (s.empty()) throw Error("chain overlap set is empty");
    chain.overlaps.push_back(s);
  }
  return chain;
}

} // namespace

Chain build_chain(const ChainSpec& spec, const Cylinder& domain) {
  return build_direct(spec, domain, true);
}

double chain_oscillation(const FieldView& f, const Chain& chain) {
  if (!chain.subchains.empty()) {
    // Sample-count-weighted sum over tile pairs: the tile grids partition
    // the endpoint samples, so the weighted identity is exact.
    long double total_a = 0.0L, total_b = 0.0L;
    std::vector<std::size_t> na, nb;
    for (const auto& t : chain.start_tiles) {
      const std::size_t c = index_range(*f.grid, t).count();
      na.push_back(c);
      total_a += c;
    }
    for (const auto& t : chain.target_tiles) {
      const std::size_t c = index_range(*f.grid, t).count();
      nb.push_back(c);
      total_b += c;
    }
    if (!(total_a > 0.0L) || !(total_b > 0.0L))
      throw ResolutionError("chain endpoints hold no samples", 0);
    long double sum = 0.0L;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < na.size(); ++i)
      for (std::size_t j = 0; j < nb.size(); ++j, ++idx) {
        const long double w = (long double)na[i] * (long double)nb[j] /
                              (total_a * total_b);
        if (w > 0.0L)
          sum += w * (long double)chain_oscillation(f, chain.subchains[idx]);
      }
    return static_cast<double>(sum);
  }

  if (chain.overlaps.empty()) {
    // Degenerate two-block chain: the bound is the oscillation itself.
    return pair_mean(f, chain.start, chain.target);
  }
  long double total = 0.0L;
  for (std::size_t i = 0; i + 1 < chain.blocks.size(); ++i) {
    total += double_oscillation(f, chain.blocks[i], chain.overlaps[i]);
    total += pair_mean(f, chain.overlaps[i], chain.blocks[i + 1]);
  }
  return static_cast<double>(total);
}

void dump_chain(std::ostream& os, const Chain& chain) {
  auto put_box = [&](const Box& b) {
    os << "{\"space\":[";
    for (std::size_t a = 0; a < b.space.size(); ++a)
      os << (a ? "," : "") << "[" << b.space[a].lo << "," << b.space[a].hi
         << "]";
    os << "],\"time\":[" << b.time.lo << "," << b.time.hi << "]}";
  };
  os << "{\"delta\":" << chain.delta << ",\"k\":" << chain.k
     << ",\"l\":" << chain.l << ",\"epsilon\":" << chain.epsilon
     << ",\"blocks\":[";
  for (std::size_t i = 0; i < chain.blocks.size(); ++i) {
    if (i) os << ",";
    put_box(chain.blocks[i]);
  }
  os << "],\"subchains\":" << chain.subchains.size() << "}\n";
}

} // namespace pbmo
