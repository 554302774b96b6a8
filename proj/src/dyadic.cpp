#include "parabmo/dyadic.hpp"

#include <cmath>
#include <ostream>

namespace pbmo {

ExponentSequence exponent_sequence(Exponent p, std::size_t depth) {
  if (depth < 1) throw ParameterError("exponent sequence needs depth >= 1");
  ExponentSequence seq;
  seq.p = p;
  seq.k.reserve(depth);
  for (std::size_t i = 1; i <= depth; ++i) {
    const double q = static_cast<double>(i) * p.value;
    const auto ki = static_cast<std::uint64_t>(std::floor(q + 0.5));
    seq.k.push_back(ki);
  }
  // Verify the three invariants; a failure here is a bug, not bad input.
  for (std::size_t i = 1; i <= depth; ++i) {
    const double ki = static_cast<double>(seq.k[i - 1]);
    const double di = static_cast<double>(i);
    if (!(std::abs(p.value - ki / di) <= 1.0 / di + 1e-15))
      throw Error("exponent sequence violates |p - k_i/i| <= 1/i");
    if (i > 1 && seq.k[i - 1] < seq.k[i - 2])
      throw Error("exponent sequence is not non-decreasing");
    const double distortion = std::exp2(p.value * di - ki);
    if (!(distortion > 0.5 && distortion < 2.0))
      throw Error("exponent sequence distortion left (1/2, 2)");
  }
  return seq;
}

DyadicGrid::DyadicGrid(Box root, Exponent p, std::size_t depth)
    : root_(std::move(root)), seq_(exponent_sequence(p, depth)) {
  if (root_.dim() == 0 || root_.empty())
    throw ParameterError("dyadic root must be a nonempty box");
  side_ = root_.space[0].length();
  for (const auto& s : root_.space)
    if (std::abs(s.length() - side_) > 1e-12 * side_)
      throw ParameterError("dyadic root must have equal spatial sides");
}

std::uint64_t DyadicGrid::generation_size(std::size_t g) const {
  if (g > depth()) throw ParameterError("generation beyond grid depth");
  if (g == 0) return 1;
  const std::uint64_t bits =
      static_cast<std::uint64_t>(dim()) * g + seq_.k[g - 1];
  if (bits >= 62) throw ParameterError("generation too large to enumerate");
  return std::uint64_t{1} << bits;
}

std::uint64_t DyadicGrid::time_splits(std::size_t g) const {
  if (g == 0 || g > depth())
    throw ParameterError("time_splits needs 1 <= generation <= depth");
  return seq_.k[g - 1] - (g == 1 ? 0 : seq_.k[g - 2]);
}

void DyadicGrid::check_id(const DyadicBoxId& id) const {
  if (id.generation > depth())
    throw ParameterError("box generation beyond grid depth");
  if (id.ix.size() != dim())
    throw ParameterError("box index dimension mismatch");
  const std::uint64_t sx = std::uint64_t{1} << id.generation;
  for (auto v : id.ix)
    if (v >= sx) throw ParameterError("spatial index out of range");
  const std::uint64_t st =
      id.generation == 0
          ? 1
          : (std::uint64_t{1} << seq_.k[id.generation - 1]);
  if (id.it >= st) throw ParameterError("temporal index out of range");
}

Box DyadicGrid::box(const DyadicBoxId& id) const {
  check_id(id);
  // Splitting fractions are dyadic rationals, so interval endpoints are
  // exact multiples of ldexp(extent, -bits) and partitions close exactly.
  Box b;
  b.space.reserve(dim());
  const double sfrac = std::ldexp(1.0, -static_cast<int>(id.generation));
  for (std::size_t a = 0; a < dim(); ++a) {
    const double lo = root_.space[a].lo;
    const double w = root_.space[a].length();
    b.space.push_back({lo + w * (static_cast<double>(id.ix[a]) * sfrac),
                       lo + w * (static_cast<double>(id.ix[a] + 1) * sfrac)});
  }
  const int kbits =
      id.generation == 0 ? 0 : static_cast<int>(seq_.k[id.generation - 1]);
  const double tfrac = std::ldexp(1.0, -kbits);
  const double tlo = root_.time.lo;
  const double tw = root_.time.length();
  b.time = {tlo + tw * (static_cast<double>(id.it) * tfrac),
            tlo + tw * (static_cast<double>(id.it + 1) * tfrac)};
  return b;
}

DyadicBoxId DyadicGrid::parent(const DyadicBoxId& id) const {
  check_id(id);
  if (id.generation == 0)
    throw ParameterError("the root box has no parent");
  DyadicBoxId up;
  up.generation = id.generation - 1;
  up.ix.reserve(dim());
  for (auto v : id.ix) up.ix.push_back(v >> 1);
  up.it = id.it >> time_splits(id.generation);
  return up;
}

std::vector<DyadicBoxId> DyadicGrid::children(const DyadicBoxId& id) const {
  check_id(id);
  if (id.generation == depth())
    throw ParameterError("deepest generation has no children");
  const std::size_t g = id.generation + 1;
  const std::uint64_t tsplit = time_splits(g);
  const std::uint64_t tcount = std::uint64_t{1} << tsplit;
  std::vector<DyadicBoxId> out;
  out.reserve((std::size_t{1} << dim()) * tcount);
  const std::uint64_t corners = std::uint64_t{1} << dim();
  for (std::uint64_t c = 0; c < corners; ++c) {
    DyadicBoxId ch;
    ch.generation = g;
    ch.ix.reserve(dim());
    for (std::size_t a = 0; a < dim(); ++a)
      ch.ix.push_back((id.ix[a] << 1) | ((c >> a) & 1));
    for (std::uint64_t t = 0; t < tcount; ++t) {
      ch.it = (id.it << tsplit) | t;
      out.push_back(ch);
    }
  }
  return out;
}

DyadicBoxId DyadicGrid::locate(std::span<const double> x, double t,
                               std::size_t generation) const {
  if (generation > depth())
    throw ParameterError("generation beyond grid depth");
  if (x.size() != dim()) throw ParameterError("point dimension mismatch");
  DyadicBoxId id;
  id.generation = generation;
  id.ix.reserve(dim());
  const std::uint64_t sx = std::uint64_t{1} << generation;
  for (std::size_t a = 0; a < dim(); ++a) {
    const auto& s = root_.space[a];
    if (!s.contains(x[a])) throw DomainError("point outside the root box");
    auto i = static_cast<std::uint64_t>((x[a] - s.lo) / s.length() *
                                        static_cast<double>(sx));
    if (i >= sx) i = sx - 1;
    id.ix.push_back(i);
  }
  if (!root_.time.contains(t)) throw DomainError("time outside the root box");
  const std::uint64_t st =
      generation == 0 ? 1 : (std::uint64_t{1} << seq_.k[generation - 1]);
  auto it = static_cast<std::uint64_t>((t - root_.time.lo) /
                                       root_.time.length() *
                                       static_cast<double>(st));
  if (it >= st) it = st - 1;
  id.it = it;
  return id;
}

CoverBox DyadicGrid::cover_box(const DyadicBoxId& id) const {
  const Box q = box(id);
  CoverBox cov;
  cov.covered = id;
  cov.box = q;
  if (id.generation == 0) {
    cov.volume_ratio = 1.0;
    return cov;
  }
  const std::size_t i = id.generation;
  // True-parabolic temporal side at this generation: (2^{-i})^p * T0.
  const double parabolic_t =
      std::exp2(-seq_.p.value * static_cast<double>(i)) * root_.time.length();
  const double dyadic_t = q.time.length();
  if (parabolic_t > dyadic_t) {
    // Extend the temporal side to the parabolic one, keeping containment;
    // slide back if the extension leaves the root.
    double lo = q.time.lo;
    double hi = lo + parabolic_t;
    if (hi > root_.time.hi) {
      hi = root_.time.hi;
      lo = hi - parabolic_t;
      if (lo > q.time.lo) lo = q.time.lo; // root shorter than the cover
    }
    cov.box.time = {lo, hi < q.time.hi ? q.time.hi : hi};
  }
  cov.volume_ratio = cov.box.volume() / q.volume();
  return cov;
}

std::vector<DyadicBoxId> DyadicGrid::generation(std::size_t g) const {
  const std::uint64_t count = generation_size(g);
  if (count > (std::uint64_t{1} << 22))
    throw ParameterError("generation too large to materialize");
  std::vector<DyadicBoxId> out;
  out.reserve(count);
  const std::uint64_t sx = std::uint64_t{1} << g;
  const std::uint64_t st = g == 0 ? 1 : (std::uint64_t{1} << seq_.k[g - 1]);
  DyadicBoxId id;
  id.generation = g;
  id.ix.assign(dim(), 0);
  for (std::uint64_t flat = 0; flat < count; ++flat) {
    out.push_back(id);
    if (++id.it == st) {
      id.it = 0;
      for (std::size_t a = dim(); a-- > 0;) {
        if (++id.ix[a] < sx) break;
        id.ix[a] = 0;
      }
    }
  }
  return out;
}

void DyadicGrid::dump(std::ostream& os, std::size_t max_generation) const {
  for (std::size_t g = 0; g <= max_generation && g <= depth(); ++g) {
    for (const auto& id : generation(g)) {
      const Box b = box(id);
      os << "{\"generation\":" << g << ",\"index\":[";
      for (std::size_t a = 0; a < id.ix.size(); ++a)
        os << (a ? "," : "") << id.ix[a];
      os << "," << id.it << "],\"spatial_lo\":[";
      for (std::size_t a = 0; a < b.space.size(); ++a)
        os << (a ? "," : "") << b.space[a].lo;
      os << "],\"spatial_hi\":[";
      for (std::size_t a = 0; a < b.space.size(); ++a)
        os << (a ? "," : "") << b.space[a].hi;
      os << "],\"t_lo\":" << b.time.lo << ",\"t_hi\":" << b.time.hi;
      if (g > 0) {
        const DyadicBoxId up = parent(id);
        os << ",\"parent_index\":[";
        for (std::size_t a = 0; a < up.ix.size(); ++a)
          os << (a ? "," : "") << up.ix[a];
        os << "," << up.it << "]";
      }
      os << "}\n";
    }
  }
}

} // namespace pbmo
