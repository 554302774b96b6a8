#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "parabmo/geometry.hpp"

namespace pbmo {

/// Which part of the function an average refers to.
enum class Part { full, positive, negative };

/// Uniform lattice over a bounded cylinder. Sample points sit at the cell
/// centres of the nx[0] x ... x nx[n-1] x nt partition.
struct GridSpec {
  Cylinder domain;
  std::vector<std::size_t> nx;
  std::size_t nt = 0;

  GridSpec() = default;
  GridSpec(Cylinder dom, std::vector<std::size_t> nx_, std::size_t nt_);

  std::size_t dim() const { return nx.size(); }
  std::size_t spatial_count() const;
  std::size_t point_count() const { return spatial_count() * nt; }

  double spacing(std::size_t axis) const {
    return domain.bounds.space[axis].length() / static_cast<double>(nx[axis]);
  }
  double time_spacing() const {
    return domain.bounds.time.length() / static_cast<double>(nt);
  }
  double coord(std::size_t axis, std::size_t i) const {
    return domain.bounds.space[axis].lo + (static_cast<double>(i) + 0.5) * spacing(axis);
  }
  double time_coord(std::size_t k) const {
    return domain.bounds.time.lo + (static_cast<double>(k) + 0.5) * time_spacing();
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Index-space box: half-open [lo, hi) per spatial axis plus [t_lo, t_hi).
struct IndexBox {
  std::vector<std::size_t> lo, hi;
  std::size_t t_lo = 0, t_hi = 0;

  std::size_t spatial_count() const {
    std::size_t c = 1;
    for (std::size_t a = 0; a < lo.size(); ++a) c *= hi[a] - lo[a];
    return c;
  }
  std::size_t time_count() const { return t_hi - t_lo; }
  std::size_t count() const { return spatial_count() * time_count(); }
  /// True when every axis holds at least min_per_axis sample planes.
  bool meets(std::size_t min_per_axis) const {
    if (time_count() < min_per_axis) return false;
    for (std::size_t a = 0; a < lo.size(); ++a)
      if (hi[a] - lo[a] < min_per_axis) return false;
    return true;
  }
};

/// Map a physical box to the index box of contained cell centres,
/// clamped to the grid. Both the accumulator path and the direct oracle
/// must go through this mapping so they see the same sample set.
IndexBox index_range(const GridSpec& grid, const Box& b);

struct BoxAverageReport {
  double mean = 0.0;
  std::size_t sample_count = 0;
  Box box;
};

/// Per-axis minimum sample planes a box must contain to be averaged.
inline constexpr std::size_t kMinSamplesPerAxis = 2;

/// Discrete space-time function on a uniform lattice. Values are immutable
/// after construction. Box sums use per-slice spatial prefix tables in
/// extended precision, combined across the time axis by a running mean,
/// so that time-uniform fields average to the slice mean bit-exactly.
class SampledField {
public:
  SampledField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(std::size_t spatial_flat, std::size_t t) const {
    return values_[t * sx_ + spatial_flat];
  }

  /// Arithmetic mean of the selected part over lattice points inside b.
  /// Throws ResolutionError when any axis has fewer than two planes.
  BoxAverageReport box_average(const Box& b, Part part = Part::full) const;

  /// Mean over the index box (already resolved); same contract.
  BoxAverageReport box_average(const IndexBox& ib, const Box& original) const;
  double index_box_mean(const IndexBox& ib, Part part) const;

  /// Spatial-only mean of the selected part over one time slice.
  double slice_mean(Part part, std::size_t t, const IndexBox& spatial) const;

  SampledField pos_part() const;
  SampledField neg_part() const;
  SampledField negate() const;
  /// Values re-indexed by t -> -t about the cylinder's temporal midpoint.
  SampledField time_reverse() const;

private:
  void build_prefix();
  long double slice_sum(const std::vector<long double>& table, std::size_t t,
                        const IndexBox& spatial) const;

  GridSpec grid_;
  std::vector<double> values_;
  std::size_t sx_ = 0; // spatial points per slice
  std::vector<std::size_t> pstride_;
  std::size_t pslice_ = 0; // prefix entries per slice
  std::vector<long double> pfull_, ppos_, pneg_;
};

/// Closed-form evaluator sampled at every cell centre.
using Evaluator = std::function<double(std::span<const double> x, double t)>;

/// Sample an evaluator on the grid. Non-finite values raise SamplingError
/// naming the offending coordinates.
SampledField sample(const Evaluator& f, const GridSpec& grid);

/// Raw samples of the box, in index order (time-major). Empty optional if
/// a defined-mask is given and the box touches an undefined point.
std::optional<std::vector<double>>
collect_samples(const GridSpec& grid, std::span<const double> values,
                std::span<const std::uint8_t> defined, const Box& b);

} // namespace pbmo
