#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "parabmo/common.hpp"

namespace pbmo {

/// Time-scaling exponent p > 1. Time scales as space to the power p.
struct Exponent {
  double value;

  explicit Exponent(double p) : value(p) {
    if (!(p > 1.0))
      throw ParameterError("exponent p must satisfy p > 1");
  }
};

/// Shape gamma in (0,1) plus the forward lag coefficient L > 1 - gamma
/// used by the one-sided seminorm variants.
struct ShapeParams {
  double gamma;
  double lag;

  ShapeParams(double gamma_, double lag_) : gamma(gamma_), lag(lag_) {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw ParameterError("shape gamma must lie in (0,1)");
    if (!(lag > 1.0 - gamma))
      throw ParameterError("lag must exceed 1 - gamma");
  }
};

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool empty() const { return !(hi > lo); }
  bool contains(double x) const { return x >= lo && x < hi; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
  Interval translated(double d) const { return {lo + d, hi + d}; }

  friend Interval intersect(const Interval& a, const Interval& b) {
    Interval r{a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
    if (r.hi < r.lo) r.hi = r.lo;
    return r;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-parallel space-time box: one half-open interval per spatial axis
/// plus one temporal interval. Carrier for rectangle parts, dyadic boxes
/// and chain blocks.
struct Box {
  std::vector<Interval> space;
  Interval time;

  std::size_t dim() const { return space.size(); }

  double volume() const {
    double v = time.length();
    for (const auto& s : space) v *= s.length();
    return v;
  }

  bool empty() const {
    if (time.empty()) return true;
    for (const auto& s : space)
      if (s.empty()) return true;
    return false;
  }

  bool contains(const Box& o) const {
    if (o.dim() != dim() || !time.contains(o.time)) return false;
    for (std::size_t a = 0; a < dim(); ++a)
      if (!space[a].contains(o.space[a])) return false;
    return true;
  }

  friend Box intersect(const Box& a, const Box& b) {
    Box r;
    r.time = intersect(a.time, b.time);
    r.space.reserve(a.space.size());
    for (std::size_t i = 0; i < a.space.size(); ++i)
      r.space.push_back(intersect(a.space[i], b.space[i]));
    return r;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

/// Shift the temporal interval by dt; spatial part is untouched.
inline Box translate_time(const Box& b, double dt) {
  Box r = b;
  r.time = r.time.translated(dt);
  return r;
}

/// Parabolic dilation (x, t) -> (delta x, delta^p t) about the origin.
inline Box dilate(const Box& b, double delta, Exponent p) {
  if (!(delta > 0.0))
    throw ParameterError("dilation factor must be positive");
  Box r = b;
  for (auto& s : r.space) {
    s.lo *= delta;
    s.hi *= delta;
  }
  const double dt = std::pow(delta, p.value);
  r.time.lo *= dt;
  r.time.hi *= dt;
  return r;
}

/// Bounded space-time cylinder. Rectangles reaching outside are rejected,
/// never clipped, by every supremum-forming operation.
struct Cylinder {
  Box bounds;

  std::size_t dim() const { return bounds.dim(); }

  bool contains(const Box& b, double tol = 0.0) const {
    if (b.dim() != dim()) return false;
    if (b.time.lo < bounds.time.lo - tol || b.time.hi > bounds.time.hi + tol)
      return false;
    for (std::size_t a = 0; a < dim(); ++a)
      if (b.space[a].lo < bounds.space[a].lo - tol ||
          b.space[a].hi > bounds.space[a].hi + tol)
        return false;
    return true;
  }
};

/// Parabolic rectangle R = Q x (t - ell^p, t + ell^p) with Q the cube of
/// side ell centred at center_x. lower(gamma) and upper(gamma) are the
/// past and future test boxes, separated by the gap 2(1-gamma) ell^p.
struct ParabolicRectangle {
  std::vector<double> center_x;
  double center_t = 0.0;
  double ell = 1.0;
  Exponent p{2.0};

  ParabolicRectangle(std::vector<double> cx, double ct, double side, Exponent pe)
      : center_x(std::move(cx)), center_t(ct), ell(side), p(pe) {
    if (!(ell > 0.0))
      throw ParameterError("rectangle side length must be positive");
  }

  double time_half() const { return std::pow(ell, p.value); }

  Box cube_box(const Interval& t) const {
    Box b;
    b.space.reserve(center_x.size());
    for (double c : center_x)
      b.space.push_back({c - 0.5 * ell, c + 0.5 * ell});
    b.time = t;
    return b;
  }

  Box full_box() const {
    const double tp = time_half();
    return cube_box({center_t - tp, center_t + tp});
  }

  /// R^-(gamma) = Q x (t - ell^p, t - (1-gamma) ell^p).
  Box lower_part(double gamma) const {
    check_gamma(gamma);
    const double tp = time_half();
    return cube_box({center_t - tp, center_t - (1.0 - gamma) * tp});
  }

  /// R^+(gamma) = Q x (t + (1-gamma) ell^p, t + ell^p).
  Box upper_part(double gamma) const {
    check_gamma(gamma);
    const double tp = time_half();
    return cube_box({center_t + (1.0 - gamma) * tp, center_t + tp});
  }

private:
  static void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw ParameterError("shape gamma must lie in (0,1)");
  }
};

} // namespace pbmo
