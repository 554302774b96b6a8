#pragma once

#include <vector>

#include "parabmo/seminorms.hpp"

namespace pbmo {

enum class MomentSide { over, under };

/// Mean over the box of exp(c (u-b)^+) (side over) or exp(c (b-u)^+)
/// (side under). Accumulates in log-space once any exponent passes 700
/// so large c never overflows.
double exp_moment(const FieldView& f, const Box& box, double b, double c,
                  MomentSide side);

struct JNReport {
  ParabolicRectangle rectangle{{0.0}, 0.0, 1.0, Exponent(2.0)};
  double b = 0.0; // centering constant of the binding rectangle
  std::vector<double> c_grid;
  std::vector<double> lower_moments; // worst-over-family, per c
  std::vector<double> upper_moments;
  double c_star = 0.0;          // largest c with both moments <= cap
  double c_star_lower = 0.0;    // bracketing grid neighbours
  double c_star_upper = 0.0;
  double moment_cap = 2.0;
  std::size_t family_size = 0;
};

/// Default scan grid: `count` log-spaced points in [c_lo, c_hi].
std::vector<double> default_c_grid(double c_lo, double c_hi,
                                   std::size_t count = 32);

/// Scan the family: per rectangle, b is the optimal centering constant of
/// the seminorm objective; moments of (u-b)^+ over the lower part and
/// (b-u)^+ over the upper part are maximized over the family per c, and
/// c_star is the largest grid c where both stay at or below moment_cap.
JNReport jn_scan(const FieldView& f, const RectangleFamily& fam, double gamma,
                 const std::vector<double>& c_grid, double moment_cap = 2.0);

} // namespace pbmo
