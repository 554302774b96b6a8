#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "parabmo/seminorms.hpp"

namespace pbmo {

enum class Direction { backward, forward };

/// Configuration of the maximal-operator supremum: shape gamma and the
/// finite geometric ladder of tested side lengths.
struct MaximalConfig {
  double gamma = 0.5;
  double ell_min = 0.0;
  double ell_max = 0.0;
  double ladder_ratio = std::pow(2.0, 0.25);
  Direction direction = Direction::backward;
};

/// Tested side lengths {ell_min * ratio^k} inside [ell_min, ell_max].
std::vector<double> ladder_of(const MaximalConfig& cfg);

/// Lattice function with explicitly tracked undefined points (points where
/// no admissible rectangle exists). Undefined values are never filled in.
struct PointField {
  GridSpec grid;
  std::vector<double> values;
  std::vector<std::uint8_t> defined;

  FieldView view() const { return {&grid, values, defined}; }
  std::size_t undefined_count() const {
    std::size_t c = 0;
    for (auto d : defined) c += d ? 0 : 1;
    return c;
  }
};

/// M_*^{gamma-}: sup over the ladder of
///   mean of f^+ over R^-(gamma) + mean of f^- over R^+(gamma),
/// rectangles centred at the evaluation point and rejected when they
/// leave the cylinder. direction == forward evaluates M_*^{gamma+} via
/// the duality M_*^{gamma+} f = M_*^{gamma-}(-f).
PointField maximal_star(const SampledField& f, const MaximalConfig& cfg);

/// M^{gamma-}: sup over the ladder of the mean of |f| over R^-(gamma).
PointField maximal_plain(const SampledField& f, const MaximalConfig& cfg);

/// The future-negativity component: sup over the ladder of the mean of
/// f^- over R^+(gamma). This is the U^- of the pointwise sandwich.
PointField maximal_future_negative(const SampledField& f,
                                   const MaximalConfig& cfg);

struct DeviationReport {
  double max_abs_deviation = 0.0;
  std::size_t compared = 0;
  std::size_t undefined_count = 0;
};

/// Verifies M_*^{gamma-}(-f) = M_*^{gamma+} f on the fixed rectangle
/// family, with the forward side evaluated directly (time-mirrored
/// formula) rather than through the duality.
DeviationReport duality_check(const SampledField& f, const MaximalConfig& cfg);

struct SplitCutoff {
  double cutoff_factor = 0.01;
  double reference_ell = 1.0;
};

/// U1 = sup over ell <= cutoff, U2 = sup over ell >= cutoff. An empty
/// sub-ladder yields an all-undefined component; both empty is an error.
std::pair<PointField, PointField> split(const SampledField& f,
                                        const MaximalConfig& cfg,
                                        const SplitCutoff& cut);

/// For f(x,t) = g(x): compares maximal_star on an interior time slice with
/// the centred-cube Hardy-Littlewood maximal of |g| over the same ladder,
/// restricted to points whose full ladder fits. Contract: deviation 0.
DeviationReport hl_reduction_check(const SampledField& f,
                                   const MaximalConfig& cfg);

} // namespace pbmo
