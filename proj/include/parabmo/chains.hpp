#pragma once

#include <iosfwd>
#include <vector>

#include "parabmo/seminorms.hpp"

namespace pbmo {

/// Endpoints of a chain: the start block is the lower theta-part of the
/// parabolic rectangle centred at (center_x, center_t) with side ell, and
/// the target is the start translated by (v, tau * ell^p).
struct ChainSpec {
  std::vector<double> center_x;
  double center_t = 0.0;
  double ell = 1.0;
  double theta = 0.5;
  double tau = 3.0;
  std::vector<double> v;
  Exponent p{2.0};
};

/// A built chain. Direct chains carry the block/overlap schedule; when
/// the time budget is too small for the spatial distance, the chain is
/// epsilon-refined: start and target are tiled and `subchains` holds one
/// direct chain per tile pair (weights are sample-count fractions,
/// resolved against the field at oscillation time).
struct Chain {
  Box start;
  Box target;
  std::vector<Box> blocks;   // P_1..P_B; blocks.front() = start tile
  std::vector<Box> overlaps; // S_i = (P_i + (1+theta) ell^p) and P_{i+1}
  double block_time_half = 0.0; // ell^p of the blocks' scale
  double theta = 0.5;
  double delta = 0.5;    // consecutive-cube overlap fraction (k >= 1)
  std::size_t k = 0;     // spatial steps
  std::size_t l = 0;     // extra vertical steps beyond k
  double epsilon = 1.0;  // refinement factor; 1 when unused
  std::vector<Box> start_tiles, target_tiles; // refined case only
  std::vector<Chain> subchains;               // one per tile pair
};

/// Build the chain for a spec, rejecting geometry outside the cylinder.
/// Throws OrderError when the target does not lie strictly after the
/// start, DomainError when a block leaves the cylinder.
Chain build_chain(const ChainSpec& spec, const Cylinder& domain);

/// The telescoped upper bound for the double oscillation between start
/// and target, summed left-to-right over links (and, for refined chains,
/// the sample-count-weighted sum over tile pairs).
double chain_oscillation(const FieldView& f, const Chain& chain);

/// JSON dump of the schedule for external plotting.
void dump_chain(std::ostream& os, const Chain& chain);

} // namespace pbmo
