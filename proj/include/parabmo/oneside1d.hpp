#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "parabmo/geometry.hpp"

namespace pbmo {

/// Uniform 1D signal on an interval, cell-centred, with prefix sums of
/// the values, their positive parts, and their squares.
class Signal {
public:
  Signal(Interval domain, std::vector<double> values);

  const Interval& domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const {
    return domain_.length() / static_cast<double>(values_.size());
  }
  double coord(std::size_t i) const {
    return domain_.lo + (static_cast<double>(i) + 0.5) * spacing();
  }
  const std::vector<double>& values() const { return values_; }

  struct Range {
    std::size_t lo = 0, hi = 0; // half-open in index space
    std::size_t count() const { return hi - lo; }
  };

  /// Indices of cell centres strictly inside the open interval (a, b).
  Range open_range(double a, double b) const;

  double mean(Range r) const;
  double pos_mean(Range r) const;
  long double square_sum(Range r) const;
  std::vector<double> samples(Range r) const;

private:
  Interval domain_;
  std::vector<double> values_;
  std::vector<long double> pre_, prepos_, presq_;
};

struct OsMaximal {
  std::vector<double> values;
  std::vector<std::uint8_t> defined;
};

/// One-sided maximal function U(x) = max over the ladder h of the mean
/// of u over (x - h, x); the evaluation point's own cell is excluded and
/// windows must lie inside the domain (undefined near the left edge).
OsMaximal os_maximal(const Signal& u, const std::vector<double>& ladder);

struct IntervalFamily {
  std::size_t stride = 1;       // left endpoints every `stride` cells
  std::vector<double> widths;   // tested interval lengths
};

struct IntervalEstimate {
  double value = 0.0;
  Interval witness{0.0, 0.0};
  double constant = 0.0; // companion mean at the witness
  std::size_t family_size = 0;
};

/// ||u||_*: sup over I of the mean over I of (u - u_{I+|I|})^+. A defined
/// mask restricts the family to intervals whose I and I+|I| avoid
/// undefined points.
IntervalEstimate os_bmo_norm(const Signal& u, const IntervalFamily& fam,
                             std::span<const std::uint8_t> defined = {});

/// The double-average variant: sup over I of the mean over I x I+|I| of
/// (u(t1) - u(t2))^+, via the sorted prefix-sum algorithm.
IntervalEstimate os_double_norm(const Signal& u, const IntervalFamily& fam,
                                std::span<const std::uint8_t> defined = {});

enum class ChainTermination { case_k1, convergence, max_iter };

struct IntervalChainStep {
  double x = 0.0, y = 0.0, h = 0.0; // current pair ((x-h,x), (y-h,y))
  std::size_t k = 0;
  double theta = 0.0; // length given up at this step
};

struct IntervalChainTrace {
  double d = 0.0;
  std::size_t k = 0;                // k of the first step
  std::vector<Interval> intervals;  // I_j = (x-jd, x-(j-1)d), j = 1..k
  std::vector<IntervalChainStep> steps;
  std::vector<double> theta;
  ChainTermination terminated_by = ChainTermination::case_k1;
};

/// The overlapping-case iteration: from the pair ((x-h,x), (y-h,y)) with
/// x > y-h, repeatedly truncate to the modified left-most intervals until
/// the overlap drops to half (the k = 1 bisection case), the intervals
/// fall below grid resolution, or max_iter is reached.
IntervalChainTrace interval_chain(double x, double y, double h,
                                  const Signal& u,
                                  std::size_t max_iter = 64);

struct OsStopped {
  Interval box{0.0, 0.0};
  double forward_mean = 0.0;
  double parent_forward_mean = 0.0;
};

struct OsCZ {
  double lambda = 0.0;
  Interval region{0.0, 0.0}; // I- cup I
  std::vector<OsStopped> stopped;
  std::vector<double> g;
  std::vector<std::uint8_t> in_region;
  double root_forward_mean = 0.0;
};

/// One-sided CZ decomposition on I- cup I with forward companions
/// J+ = J + |J| (no gap): maximal dyadic subintervals whose forward mean
/// exceeds lambda. Requires lambda > the mean over I+ cup I2+.
OsCZ os_cz(const Signal& u, const Interval& base, double lambda);

struct OsCZReport {
  double reconstruction_error = 0.0;
  double on_box_g_max = 0.0;
  double off_box_u_max = 0.0;
  bool disjoint = true;
  bool maximal = true;
  std::size_t stopped_count = 0;
};

OsCZReport os_cz_verify(const OsCZ& dec, const Signal& u);

/// Sum over stopped intervals of (b_i^+)^2 integrated (cell-width
/// weighted) — the left side of the L2 bad-part bound.
double os_cz_badpart_l2(const OsCZ& dec, const Signal& u);

} // namespace pbmo
