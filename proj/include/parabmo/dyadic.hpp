#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "parabmo/geometry.hpp"

namespace pbmo {

/// The integer sequence k_i with k_i/i -> p that drives the anisotropic
/// halving of the time axis: generation i halves space i times and time
/// k_i times.
struct ExponentSequence {
  Exponent p{2.0};
  std::vector<std::uint64_t> k; // k[i-1] = k_i, i = 1..depth

  std::size_t depth() const { return k.size(); }
};

/// k_i = round-half-up(i * p); all invariants (|p - k_i/i| <= 1/i,
/// monotonicity, 2^{p i - k_i} in (1/2, 2)) are verified before return.
ExponentSequence exponent_sequence(Exponent p, std::size_t depth);

/// Address of one box: generation 0 is the root itself.
struct DyadicBoxId {
  std::size_t generation = 0;
  std::vector<std::uint64_t> ix; // spatial index per axis, < 2^generation
  std::uint64_t it = 0;          // temporal index, < 2^{k_generation}
};

struct CoverBox {
  Box box;
  DyadicBoxId covered;
  double volume_ratio = 1.0; // |box| / |covered box|
};

/// Almost-parabolic dyadic grid over a root box with equal spatial sides.
/// Generations are implicit: boxes are addressed by (generation, integer
/// index) and materialized to real coordinates on demand, so partition
/// and nesting checks run without enumerating a full generation.
class DyadicGrid {
public:
  DyadicGrid(Box root, Exponent p, std::size_t depth);

  const Box& root() const { return root_; }
  const ExponentSequence& sequence() const { return seq_; }
  std::size_t depth() const { return seq_.depth(); }
  std::size_t dim() const { return root_.dim(); }

  /// Number of boxes in one generation: 2^{n i + k_i}.
  /// Throws ParameterError when the count exceeds 2^62.
  std::uint64_t generation_size(std::size_t generation) const;

  /// Extra time-halvings taken at generation i: k_i - k_{i-1} (k_0 = 0).
  std::uint64_t time_splits(std::size_t generation) const;

  Box box(const DyadicBoxId& id) const;
  DyadicBoxId parent(const DyadicBoxId& id) const;
  std::vector<DyadicBoxId> children(const DyadicBoxId& id) const;

  /// Locate the generation-g box containing a point of the root.
  DyadicBoxId locate(std::span<const double> x, double t,
                     std::size_t generation) const;

  /// The true-parabolic companion of Lemma-(iii) type: spatial side
  /// 2^{-i} side(root), temporal side max(dyadic, parabolic) so that the
  /// cover always contains the box.
  CoverBox cover_box(const DyadicBoxId& id) const;

  /// Enumerate a whole generation (guarded against huge counts).
  std::vector<DyadicBoxId> generation(std::size_t g) const;

  /// JSON-lines dump of generations 0..depth, one box per line.
  void dump(std::ostream& os, std::size_t max_generation) const;

private:
  void check_id(const DyadicBoxId& id) const;

  Box root_;
  ExponentSequence seq_;
  double side_ = 0.0; // common spatial side of the root
};

} // namespace pbmo
