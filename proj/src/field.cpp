#include "parabmo/field.hpp"

#include <cmath>
#include <string>

namespace pbmo {

GridSpec::GridSpec(Cylinder dom, std::vector<std::size_t> nx_, std::size_t nt_)
    : domain(std::move(dom)), nx(std::move(nx_)), nt(nt_) {
  if (domain.dim() != nx.size())
    throw ParameterError("grid axis count does not match cylinder dimension");
  if (nt < 2)
    throw ParameterError("grid needs nt >= 2");
  for (std::size_t c : nx)
    if (c < 2) throw ParameterError("grid needs nx >= 2 on every axis");
  if (domain.bounds.empty())
    throw ParameterError("cylinder must have positive extent");
}

std::size_t GridSpec::spatial_count() const {
  std::size_t c = 1;
  for (std::size_t v : nx) c *= v;
  return c;
}

namespace {

// First index whose cell centre lies in [lo, hi), clamped to [0, n].
// Centres sit at origin + (i + 1/2) h. A small symmetric tolerance keeps
// boxes whose edges coincide with cell boundaries stable under rounding.
std::pair<std::size_t, std::size_t> axis_range(double origin, double h,
                                               std::size_t n, double lo,
                                               double hi) {
  const double eps = 1e-9 * h;
  double qlo = (lo - origin) / h - 0.5;
  double qhi = (hi - origin) / h - 0.5;
  long ilo = static_cast<long>(std::ceil(qlo - eps));
  long ihi = static_cast<long>(std::ceil(qhi - eps)); // exclusive
  if (ilo < 0) ilo = 0;
  if (ihi > static_cast<long>(n)) ihi = static_cast<long>(n);
  if (ihi < ilo) ihi = ilo;
  return {static_cast<std::size_t>(ilo), static_cast<std::size_t>(ihi)};
}

} // namespace

IndexBox index_range(const GridSpec& grid, const Box& b) {
  if (b.dim() != grid.dim())
    throw ParameterError("box dimension does not match grid");
  IndexBox ib;
  ib.lo.resize(grid.dim());
  ib.hi.resize(grid.dim());
  for (std::size_t a = 0; a < grid.dim(); ++a) {
    auto [l, h] = axis_range(grid.domain.bounds.space[a].lo, grid.spacing(a),
                             grid.nx[a], b.space[a].lo, b.space[a].hi);
    ib.lo[a] = l;
    ib.hi[a] = h;
  }
  auto [tl, th] = axis_range(grid.domain.bounds.time.lo, grid.time_spacing(),
                             grid.nt, b.time.lo, b.time.hi);
  ib.t_lo = tl;
  ib.t_hi = th;
  return ib;
}

SampledField::SampledField(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.point_count())
    throw ParameterError("value array size does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw ParameterError("field values must be finite");
  sx_ = grid_.spatial_count();
  build_prefix();
}

void SampledField::build_prefix() {
  const std::size_t n = grid_.dim();
  // Prefix tables have one guard plane per axis: P[i] = sum of samples with
  // index < i on every axis, per time slice.
  pstride_.assign(n, 1);
  pslice_ = 1;
  for (std::size_t a = n; a-- > 0;) {
    pstride_[a] = pslice_;
    pslice_ *= grid_.nx[a] + 1;
  }
  const std::size_t total = pslice_ * grid_.nt;
  pfull_.assign(total, 0.0L);
  ppos_.assign(total, 0.0L);
  pneg_.assign(total, 0.0L);

  std::vector<std::size_t> idx(n, 0);
  for (std::size_t t = 0; t < grid_.nt; ++t) {
    const std::size_t base = t * pslice_;
    // Scatter raw values into interior cells.
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t s = 0; s < sx_; ++s) {
      std::size_t off = base;
      for (std::size_t a = 0; a < n; ++a) off += (idx[a] + 1) * pstride_[a];
      const double v = values_[t * sx_ + s];
      pfull_[off] = v;
      ppos_[off] = v > 0.0 ? v : 0.0;
      pneg_[off] = v < 0.0 ? -v : 0.0;
      for (std::size_t a = n; a-- > 0;) {
        if (++idx[a] < grid_.nx[a]) break;
        idx[a] = 0;
      }
    }
    // Cumulative sum along each spatial axis.
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t stride = pstride_[a];
      const std::size_t extent = grid_.nx[a] + 1;
      // Iterate all lines along axis a within this slice.
      const std::size_t line_count = pslice_ / extent;
      for (std::size_t line = 0; line < line_count; ++line) {
        // Decompose 'line' into indices of the other axes.
        std::size_t off = base;
        std::size_t rem = line;
        for (std::size_t b = n; b-- > 0;) {
          if (b == a) continue;
          const std::size_t eb = grid_.nx[b] + 1;
          off += (rem % eb) * pstride_[b];
          rem /= eb;
        }
        for (std::size_t i = 1; i < extent; ++i) {
          pfull_[off + i * stride] += pfull_[off + (i - 1) * stride];
          ppos_[off + i * stride] += ppos_[off + (i - 1) * stride];
          pneg_[off + i * stride] += pneg_[off + (i - 1) * stride];
        }
      }
    }
  }
}

long double SampledField::slice_sum(const std::vector<long double>& table,
                                    std::size_t t, const IndexBox& sb) const {
  const std::size_t n = grid_.dim();
  const std::size_t base = t * pslice_;
  long double sum = 0.0L;
  // Inclusion-exclusion over the 2^n corners of the spatial box.
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::size_t off = base;
    int sign = 1;
    for (std::size_t a = 0; a < n; ++a) {
      if (mask & (std::size_t{1} << a)) {
        off += sb.lo[a] * pstride_[a];
        sign = -sign;
      } else {
        off += sb.hi[a] * pstride_[a];
      }
    }
    sum += sign * table[off];
  }
  return sum;
}

double SampledField::slice_mean(Part part, std::size_t t,
                                const IndexBox& sb) const {
  const auto& table =
      part == Part::full ? pfull_ : (part == Part::positive ? ppos_ : pneg_);
  const std::size_t cnt = sb.spatial_count();
  if (cnt == 0) throw ResolutionError("empty spatial box", 0);
  return static_cast<double>(slice_sum(table, t, sb) /
                             static_cast<long double>(cnt));
}

double SampledField::index_box_mean(const IndexBox& ib, Part part) const {
  const auto& table =
      part == Part::full ? pfull_ : (part == Part::positive ? ppos_ : pneg_);
  if (!ib.meets(kMinSamplesPerAxis))
    throw ResolutionError("box holds fewer than the minimum samples per axis",
                          ib.count());
  const long double cnt = static_cast<long double>(ib.spatial_count());
  // Running mean over slice means: exact when every slice is identical.
  long double mean = 0.0L;
  std::size_t j = 0;
  for (std::size_t t = ib.t_lo; t < ib.t_hi; ++t) {
    const long double s = slice_sum(table, t, ib) / cnt;
    ++j;
    mean += (s - mean) / static_cast<long double>(j);
  }
  return static_cast<double>(mean);
}

BoxAverageReport SampledField::box_average(const IndexBox& ib,
                                           const Box& original) const {
  BoxAverageReport r;
  r.mean = index_box_mean(ib, Part::full);
  r.sample_count = ib.count();
  r.box = original;
  return r;
}

BoxAverageReport SampledField::box_average(const Box& b, Part part) const {
  const IndexBox ib = index_range(grid_, b);
  BoxAverageReport r;
  r.mean = index_box_mean(ib, part);
  r.sample_count = ib.count();
  r.box = b;
  return r;
}

SampledField SampledField::pos_part() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = values_[i] > 0.0 ? values_[i] : 0.0;
  return SampledField(grid_, std::move(v));
}

SampledField SampledField::neg_part() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = values_[i] < 0.0 ? -values_[i] : 0.0;
  return SampledField(grid_, std::move(v));
}

SampledField SampledField::negate() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -values_[i];
  return SampledField(grid_, std::move(v));
}

SampledField SampledField::time_reverse() const {
  std::vector<double> v(values_.size());
  for (std::size_t t = 0; t < grid_.nt; ++t) {
    const std::size_t src = (grid_.nt - 1 - t) * sx_;
    const std::size_t dst = t * sx_;
    for (std::size_t s = 0; s < sx_; ++s) v[dst + s] = values_[src + s];
  }
  return SampledField(grid_, std::move(v));
}

SampledField sample(const Evaluator& f, const GridSpec& grid) {
  const std::size_t n = grid.dim();
  std::vector<double> values(grid.point_count());
  std::vector<double> x(n);
  std::vector<std::size_t> idx(n, 0);
  const std::size_t sx = grid.spatial_count();
  for (std::size_t t = 0; t < grid.nt; ++t) {
    const double tc = grid.time_coord(t);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t s = 0; s < sx; ++s) {
      for (std::size_t a = 0; a < n; ++a) x[a] = grid.coord(a, idx[a]);
      const double v = f(x, tc);
      if (!std::isfinite(v)) {
        std::string where = "(";
        for (double c : x) where += std::to_string(c) + ", ";
        where += std::to_string(tc) + ")";
        throw SamplingError("evaluator returned non-finite value at " + where);
      }
      values[t * sx + s] = v;
      for (std::size_t a = n; a-- > 0;) {
        if (++idx[a] < grid.nx[a]) break;
        idx[a] = 0;
      }
    }
  }
  return SampledField(grid, std::move(values));
}

std::optional<std::vector<double>>
collect_samples(const GridSpec& grid, std::span<const double> values,
                std::span<const std::uint8_t> defined, const Box& b) {
  const IndexBox ib = index_range(grid, b);
  const std::size_t n = grid.dim();
  const std::size_t sx = grid.spatial_count();
  std::vector<double> out;
  out.reserve(ib.count());
  std::vector<std::size_t> idx(n);
  const std::size_t per_slice = ib.spatial_count();
  for (std::size_t t = ib.t_lo; t < ib.t_hi && per_slice > 0; ++t) {
    for (std::size_t a = 0; a < n; ++a) idx[a] = ib.lo[a];
    for (std::size_t visited = 0; visited < per_slice; ++visited) {
      std::size_t s = 0;
      for (std::size_t a = 0; a < n; ++a) s = s * grid.nx[a] + idx[a];
      const std::size_t flat = t * sx + s;
      if (!defined.empty() && !defined[flat]) return std::nullopt;
      out.push_back(values[flat]);
      for (std::size_t a = n; a-- > 0;) {
        if (++idx[a] < ib.hi[a]) break;
        idx[a] = ib.lo[a];
      }
    }
  }
  return out;
}

} // namespace pbmo
