#include "parabmo/czdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace pbmo {

Box forward_box(const DyadicGrid& grid, const DyadicBoxId& id,
                const CZConfig& cfg) {
  const Box base =
      cfg.use_cover_for_stopping ? grid.cover_box(id).box : grid.box(id);
  return translate_time(base, cfg.offset_factor * base.time.length());
}

namespace {

// Forward-companion average, or nothing when the companion leaves the
// cylinder or holds too few samples.
std::optional<double> forward_mean(const SampledField& f,
                                   const DyadicGrid& grid,
                                   const DyadicBoxId& id,
                                   const CZConfig& cfg) {
  const Box fb = forward_box(grid, id, cfg);
  const GridSpec& g = f.grid();
  double hmin = g.time_spacing();
  for (std::size_t a = 0; a < g.dim(); ++a) hmin = std::min(hmin, g.spacing(a));
  if (!g.domain.contains(fb, 1e-9 * hmin)) return std::nullopt;
  const IndexBox ib = index_range(g, fb);
  if (!ib.meets(kMinSamplesPerAxis)) return std::nullopt;
  return f.index_box_mean(ib, Part::full);
}

void mark_box(const GridSpec& g, const Box& b, std::vector<std::uint8_t>& m,
              std::uint8_t tag) {
  const IndexBox ib = index_range(g, b);
  const std::size_t sx = g.spatial_count();
  const std::size_t n = g.dim();
  std::vector<std::size_t> idx(n);
  const std::size_t per_slice = ib.spatial_count();
  for (std::size_t t = ib.t_lo; t < ib.t_hi && per_slice > 0; ++t) {
    for (std::size_t a = 0; a < n; ++a) idx[a] = ib.lo[a];
    for (std::size_t visited = 0; visited < per_slice; ++visited) {
      std::size_t s = 0;
      for (std::size_t a = 0; a < n; ++a) s = s * g.nx[a] + idx[a];
      m[t * sx + s] = tag;
      for (std::size_t a = n; a-- > 0;) {
        if (++idx[a] < ib.hi[a]) break;
        idx[a] = ib.lo[a];
      }
    }
  }
}

void descend(const SampledField& f, const DyadicGrid& grid,
             const CZConfig& cfg, const DyadicBoxId& id, double own_mean,
             CZDecomposition& out) {
  if (id.generation == grid.depth()) return; // unresolved leaf stays in g
  for (const auto& ch : grid.children(id)) {
    const auto m = forward_mean(f, grid, ch, cfg);
    if (!m) {
      out.unresolved.push_back({ch, grid.box(ch)});
      continue;
    }
    if (*m > cfg.lambda)
      out.stopped.push_back({ch, grid.box(ch), *m, own_mean});
    else
      descend(f, grid, cfg, ch, *m, out);
  }
}

} // namespace

CZDecomposition decompose(const SampledField& f, const DyadicGrid& grid,
                          const CZConfig& cfg) {
  CZDecomposition out;
  out.config = cfg;
  const DyadicBoxId root{0, std::vector<std::uint64_t>(grid.dim(), 0), 0};
  const auto rm = forward_mean(f, grid, root, cfg);
  if (!rm)
    throw DomainError("the root's forward companion leaves the cylinder");
  out.root_forward_mean = *rm;
  if (!(cfg.lambda > *rm))
    throw ParameterError("lambda must exceed the root forward average");

  descend(f, grid, cfg, root, *rm, out);

  const GridSpec& g = f.grid();
  out.g = f.values();
  out.in_region.assign(g.point_count(), 0);
  mark_box(g, grid.root(), out.in_region, 1);
  for (const auto& st : out.stopped) {
    const IndexBox ib = index_range(g, st.box);
    std::vector<std::uint8_t> inside(g.point_count(), 0);
    mark_box(g, st.box, inside, 1);
    for (std::size_t i = 0; i < inside.size(); ++i)
      if (inside[i]) out.g[i] = st.parent_forward_mean;
    (void)ib;
  }
  return out;
}

CZReport verify(const CZDecomposition& dec, const SampledField& f,
                const DyadicGrid& grid) {
  CZReport rep;
  rep.stopped_count = dec.stopped.size();
  const GridSpec& g = f.grid();
  const std::size_t total = g.point_count();

  // Which lattice points the stopped boxes claim.
  std::vector<std::uint8_t> claimed(total, 0);
  for (const auto& st : dec.stopped) mark_box(g, st.box, claimed, 1);

  // Disjointness: physical intersection of any two stopped boxes empty.
  for (std::size_t i = 0; i < dec.stopped.size() && rep.disjoint; ++i)
    for (std::size_t j = i + 1; j < dec.stopped.size(); ++j) {
      if (!intersect(dec.stopped[i].box, dec.stopped[j].box).empty()) {
        rep.disjoint = false;
        break;
      }
    }

  // Maximality: every stopped box's parent stays at or below lambda,
  // re-evaluated from scratch.
  for (const auto& st : dec.stopped) {
    const DyadicBoxId up = grid.parent(st.id);
    const Box fb = forward_box(grid, up, dec.config);
    const double m = f.box_average(fb, Part::full).mean;
    if (!(m <= dec.config.lambda)) rep.maximal = false;
    if (std::abs(m - st.parent_forward_mean) > 0.0) rep.maximal = false;
  }

  // Pointwise contracts on the region.
  bool first_off = true, first_on = true;
  for (std::size_t i = 0; i < total; ++i) {
    if (!dec.in_region[i]) continue;
    const double u = f.values()[i];
    const double b = claimed[i] ? u - dec.g[i] : 0.0;
    const double err = std::abs(u - (b + dec.g[i]));
    rep.reconstruction_error = std::max(rep.reconstruction_error, err);
    if (claimed[i]) {
      rep.on_box_g_max = first_on ? dec.g[i] : std::max(rep.on_box_g_max, dec.g[i]);
      first_on = false;
    } else {
      rep.off_box_u_max = first_off ? u : std::max(rep.off_box_u_max, u);
      first_off = false;
    }
  }
  return rep;
}

} // namespace pbmo
