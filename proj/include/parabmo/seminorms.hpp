#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "parabmo/field.hpp"

namespace pbmo {

/// Read-only view of lattice values with an optional defined-mask.
/// Rectangles touching an undefined point are skipped by family scans.
struct FieldView {
  const GridSpec* grid = nullptr;
  std::span<const double> values;
  std::span<const std::uint8_t> defined; // empty = everywhere defined
};

inline FieldView view_of(const SampledField& f) {
  return {&f.grid(), f.values(), {}};
}

/// Discretized index set for the supremum over parabolic rectangles:
/// centres on a strided sub-lattice, side lengths on a geometric ladder.
struct RectangleFamily {
  std::vector<std::size_t> stride; // per spatial axis, in lattice points
  std::size_t tstride = 1;
  std::vector<double> ladder; // tested side lengths
  Exponent p{2.0};
};

struct SeminormEstimate {
  double value = 0.0;
  std::optional<ParabolicRectangle> witness;
  double constant = 0.0; // optimizing a_R, or the companion mean b_R
  std::size_t family_size = 0; // rectangles actually evaluated
};

struct OptimalConstant {
  double a = 0.0;
  double value = 0.0;
};

/// Minimize g(a) = mean_lower (u-a)^+ + mean_upper (a-u)^+ over a.
/// g is convex piecewise linear; the leftmost minimizer is returned.
OptimalConstant optimal_constant(std::span<const double> lower_samples,
                                 std::span<const double> upper_samples);

enum class PbmoDirection { minus, plus };

/// PBMO seminorm estimate: sup over the family of the optimal two-sided
/// oscillation over R^-(gamma), R^+(gamma). Direction plus runs on the
/// time-reversed data.
SeminormEstimate pbmo_seminorm(const FieldView& f, const RectangleFamily& fam,
                               PbmoDirection direction = PbmoDirection::minus,
                               double gamma = 0.5);

enum class BmoVariantSide { plus, minus_neg };

/// One-sided BMO conditions: side plus is the BMO^+ quantity
/// mean_{R^-(gamma)} (u - u_{shifted})^+, side minus_neg the -BMO^-
/// quantity mean_{shifted} (u_{R^-(gamma)} - u)^+, with
/// shifted = R^-(gamma) + lag * ell^p.
SeminormEstimate bmo_variant_seminorm(const FieldView& f,
                                      const RectangleFamily& fam, double gamma,
                                      double lag, BmoVariantSide side);

/// Exact double average over A x B of (f(x) - f(y))^+, by sorting and
/// prefix-summing rather than the quadratic loop. Requires A to end
/// strictly before B starts.
double double_oscillation(const FieldView& f, const Box& a, const Box& b);

/// Enumerate the admissible rectangles of a family (full box inside the
/// cylinder, both gamma-parts resolvable, no undefined samples).
std::vector<ParabolicRectangle>
family_rectangles(const FieldView& f, const RectangleFamily& fam, double gamma);

} // namespace pbmo
