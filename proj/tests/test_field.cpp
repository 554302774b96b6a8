#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "parabmo/field.hpp"

using namespace pbmo;

namespace {

IndexBox random_index_box(std::mt19937_64& rng, const GridSpec& g) {
  IndexBox ib;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    std::uniform_int_distribution<std::size_t> lo(0, g.nx[a] - 2);
    const std::size_t l = lo(rng);
    std::uniform_int_distribution<std::size_t> hi(l + 2, g.nx[a]);
    ib.lo.push_back(l);
    ib.hi.push_back(hi(rng));
  }
  std::uniform_int_distribution<std::size_t> tlo(0, g.nt - 2);
  ib.t_lo = tlo(rng);
  std::uniform_int_distribution<std::size_t> thi(ib.t_lo + 2, g.nt);
  ib.t_hi = thi(rng);
  return ib;
}

} // namespace

TEST_CASE("grid validation") {
  Box b{{{0.0, 1.0}}, {0.0, 1.0}};
  CHECK_THROWS_AS(GridSpec(Cylinder{b}, {1}, 4), ParameterError);
  CHECK_THROWS_AS(GridSpec(Cylinder{b}, {4}, 1), ParameterError);
  CHECK_THROWS_AS(GridSpec(Cylinder{b}, {4, 4}, 4), ParameterError);
  CHECK_NOTHROW(GridSpec(Cylinder{b}, {2}, 2));
}

TEST_CASE("constant field averages to the constant") {
  const GridSpec g = oracles::unit_grid(16, 16);
  const SampledField f = sample([](auto, double) { return 7.0; }, g);
  Box b{{{0.2, 0.8}}, {-0.5, 0.5}};
  CHECK(f.box_average(b).mean == 7.0);
}

TEST_CASE("linear-in-time field averages to the temporal midpoint") {
  const GridSpec g = oracles::unit_grid(8, 64);
  const SampledField f = sample([](auto, double t) { return t; }, g);
  // Box symmetric about t0 = 0 picks up symmetric cell centres.
  Box b{{{0.0, 1.0}}, {-0.5, 0.5}};
  CHECK(f.box_average(b).mean == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("prefix sums match direct summation: 1000 random cases") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 10; ++rep) {
    const GridSpec g =
        rep % 2 ? oracles::unit_grid2(12, 9, 10) : oracles::unit_grid(31, 23);
    SampledField f(g, oracles::random_values(rng, g.point_count(), -5.0, 5.0));
    for (int c = 0; c < 100; ++c) {
      const IndexBox ib = random_index_box(rng, g);
      for (Part part : {Part::full, Part::positive, Part::negative}) {
        const double fast = f.index_box_mean(ib, part);
        const double slow = oracles::direct_mean(f, ib, part);
        CHECK(std::abs(fast - slow) <=
              1e-10 * std::max(1.0, std::abs(slow)));
      }
    }
  }
}

TEST_CASE("positive and negative parts decompose the field") {
  std::mt19937_64 rng(5);
  const GridSpec g = oracles::unit_grid(16, 16);
  SampledField f(g, oracles::random_values(rng, g.point_count()));
  const SampledField p = f.pos_part(), n = f.neg_part(), m = f.negate();
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    CHECK(f.values()[i] == p.values()[i] - n.values()[i]);
    CHECK(std::abs(f.values()[i]) == p.values()[i] + n.values()[i]);
    CHECK(m.values()[i] == -f.values()[i]);
    CHECK(p.values()[i] >= 0.0);
    CHECK(n.values()[i] >= 0.0);
  }
  // Same-box averages split exactly (same sample set).
  Box b{{{0.1, 0.9}}, {-0.7, 0.4}};
  const double full = f.box_average(b, Part::full).mean;
  const double pos = f.box_average(b, Part::positive).mean;
  const double neg = f.box_average(b, Part::negative).mean;
  CHECK(full == doctest::Approx(pos - neg).epsilon(1e-14));
}

TEST_CASE("constant sign structure of e^t - e^{-t}") {
  const GridSpec g = oracles::unit_grid(8, 32, 0.0, 1.0, -2.0, 2.0);
  const SampledField f =
      sample([](auto, double t) { return std::exp(t) - std::exp(-t); }, g);
  const SampledField p = f.pos_part(), n = f.neg_part();
  const std::size_t sx = g.spatial_count();
  for (std::size_t t = 0; t < g.nt; ++t)
    for (std::size_t s = 0; s < sx; ++s) {
      const double tc = g.time_coord(t);
      if (tc > 0.0) CHECK(n.values()[t * sx + s] == 0.0);
      if (tc < 0.0) CHECK(p.values()[t * sx + s] == 0.0);
    }
}

TEST_CASE("time reversal is an involution and negates odd fields") {
  const GridSpec g = oracles::unit_grid(8, 16);
  std::mt19937_64 rng(17);
  SampledField f(g, oracles::random_values(rng, g.point_count()));
  const SampledField rr = f.time_reverse().time_reverse();
  CHECK(rr.values() == f.values());

  const SampledField lin = sample([](auto, double t) { return t; }, g);
  const SampledField rev = lin.time_reverse();
  for (std::size_t i = 0; i < lin.values().size(); ++i)
    CHECK(rev.values()[i] == doctest::Approx(-lin.values()[i]).epsilon(1e-14));
}

TEST_CASE("time reversal preserves averages of reflected boxes") {
  const GridSpec g = oracles::unit_grid(12, 24);
  std::mt19937_64 rng(23);
  SampledField f(g, oracles::random_values(rng, g.point_count()));
  const SampledField rev = f.time_reverse();
  Box b{{{0.2, 0.9}}, {-0.8, -0.3}};
  Box refl = b;
  refl.time = {-b.time.hi, -b.time.lo}; // midpoint of the cylinder is 0
  CHECK(f.box_average(b).mean ==
        doctest::Approx(rev.box_average(refl).mean).epsilon(1e-12));
}

TEST_CASE("sampling rejects non-finite values with coordinates") {
  const GridSpec g = oracles::unit_grid(4, 4, 0.0, 1.0, -1.0, 1.0);
  CHECK_THROWS_AS(
      sample([](auto, double t) { return std::log(t); }, g), SamplingError);
  const SampledField ok = sample([](auto x, double) { return x[0]; }, g);
  CHECK(ok.values()[0] == doctest::Approx(0.125));
}

TEST_CASE("exponential spot checks") {
  const GridSpec g = oracles::unit_grid(4, 8, 0.0, 1.0, 0.0, 2.0);
  const SampledField f = sample([](auto, double t) { return std::exp(t); }, g);
  const std::size_t sx = g.spatial_count();
  for (std::size_t t : {std::size_t{0}, std::size_t{3}, std::size_t{7}})
    CHECK(f.values()[t * sx] == std::exp(g.time_coord(t)));
}

TEST_CASE("under-resolved boxes raise ResolutionError with the count") {
  const GridSpec g = oracles::unit_grid(16, 16);
  const SampledField f = sample([](auto, double) { return 1.0; }, g);
  Box sliver{{{0.0, 0.04}}, {-1.0, 1.0}}; // one cell wide
  try {
    (void)f.box_average(sliver);
    CHECK(false);
  } catch (const ResolutionError& e) {
    CHECK(e.sample_count < 2 * g.nt + 1);
  }
}

TEST_CASE("collect_samples respects the defined mask") {
  const GridSpec g = oracles::unit_grid(4, 4);
  const SampledField f = sample([](auto, double) { return 1.0; }, g);
  std::vector<std::uint8_t> mask(g.point_count(), 1);
  Box b{{{0.0, 1.0}}, {-1.0, 1.0}};
  auto all = collect_samples(g, f.values(), mask, b);
  REQUIRE(all.has_value());
  CHECK(all->size() == g.point_count());
  mask[5] = 0;
  CHECK(!collect_samples(g, f.values(), mask, b).has_value());
}
