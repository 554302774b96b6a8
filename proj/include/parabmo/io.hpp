#pragma once

#include <iosfwd>
#include <string>

#include "parabmo/field.hpp"

namespace pbmo {

/// CSV field format: a header with n, per-axis nx, nt and the cylinder
/// extents, then one sample per line in time-major order. Values are
/// printed with 17 significant digits so a round trip is bit-exact.
void save_field(const SampledField& f, std::ostream& os);
void save_field(const SampledField& f, const std::string& path);

SampledField load_field(std::istream& is);
SampledField load_field(const std::string& path);

} // namespace pbmo
