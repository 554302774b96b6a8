#pragma once

#include <vector>

#include "parabmo/dyadic.hpp"
#include "parabmo/field.hpp"

namespace pbmo {

/// One stopped box of the decomposition, with the averages that justified
/// stopping: its own forward mean (> lambda) and its parent's (<= lambda).
struct StoppedBox {
  DyadicBoxId id;
  Box box;
  double forward_mean = 0.0;
  double parent_forward_mean = 0.0;
};

/// A branch whose forward companion leaves the cylinder or falls below
/// grid resolution; left in g and reported, never silently dropped.
struct UnresolvedBox {
  DyadicBoxId id;
  Box box;
};

struct CZConfig {
  double lambda = 0.0;
  double gamma = 0.5;
  /// Forward companion: Q + offset_factor * (temporal side of Q's cover).
  double offset_factor = 2.0;
  bool use_cover_for_stopping = true;
};

struct CZDecomposition {
  CZConfig config;
  std::vector<StoppedBox> stopped;
  std::vector<UnresolvedBox> unresolved;
  /// g on the field's lattice restricted to the root region: equal to u
  /// off the stopped boxes and to the parent forward mean on them.
  std::vector<double> g;
  std::vector<std::uint8_t> in_region; // lattice points inside the root
  double root_forward_mean = 0.0;
};

/// Forward companion box used by the stopping rule.
Box forward_box(const DyadicGrid& grid, const DyadicBoxId& id,
                const CZConfig& cfg);

/// Forward-in-time stopping decomposition u = b + g over the dyadic grid:
/// descend from the root, stop at the first box whose forward-companion
/// average exceeds lambda. Requires lambda > the root's forward average.
CZDecomposition decompose(const SampledField& f, const DyadicGrid& grid,
                          const CZConfig& cfg);

struct CZReport {
  double reconstruction_error = 0.0; // max |u - (b + g)| over the region
  double on_box_g_max = 0.0;         // max g over stopped boxes
  double off_box_u_max = 0.0;        // max u elsewhere in the region
  bool disjoint = true;
  bool maximal = true; // parents of stopped boxes stay below lambda
  std::size_t stopped_count = 0;
};

/// Re-verifies every contract of the decomposition by direct scanning,
/// independently of how decompose() assembled it.
CZReport verify(const CZDecomposition& dec, const SampledField& f,
                const DyadicGrid& grid);

} // namespace pbmo
