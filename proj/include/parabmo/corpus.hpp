#pragma once

#include <functional>
#include <string>
#include <vector>

#include "parabmo/field.hpp"

namespace pbmo {

struct CorpusFlags {
  bool nonnegative = false;
  bool increasing_in_time = false;
  bool expected_pbmo_minus_zero = false;
  bool expected_divergent_abs = false;
  bool time_independent = false;
};

/// Closed-form test function. The evaluator receives a clip length (the
/// grid's spatial spacing) used by entries with point singularities.
struct CorpusEntry {
  std::string name;
  std::string description;
  CorpusFlags flags;
  double t_min = 0.0;       // smallest admissible time (only if bounded)
  bool t_bounded = false;   // true when t_min applies
  std::function<double(std::span<const double>, double, double)> eval;
};

const std::vector<CorpusEntry>& list_entries();
const CorpusEntry& find_entry(const std::string& name);

/// Sample an entry on a grid, rejecting grids outside the entry's valid
/// time range.
SampledField evaluate_entry(const CorpusEntry& entry, const GridSpec& grid);

} // namespace pbmo
