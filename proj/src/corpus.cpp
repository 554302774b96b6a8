#include "parabmo/corpus.hpp"

#include <cmath>
#include <numbers>

namespace pbmo {

namespace {

double log_heat_kernel(std::span<const double> x, double t) {
  // log W, W(x,t) = (4 pi t)^{-n/2} exp(-|x|^2 / (4t)), t > 0.
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double n = static_cast<double>(x.size());
  return -0.5 * n * std::log(4.0 * std::numbers::pi * t) - r2 / (4.0 * t);
}

double clipped_log_abs(std::span<const double> x, double clip) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  return std::log(r < clip ? clip : r);
}

std::vector<CorpusEntry> make_entries() {
  std::vector<CorpusEntry> out;

  out.push_back({"constant",
                 "u = 1",
                 {true, true, true, false, true},
                 0.0,
                 false,
                 [](std::span<const double>, double, double) { return 1.0; }});

  out.push_back({"ramp",
                 "u = t",
                 {false, true, true, false, false},
                 0.0,
                 false,
                 [](std::span<const double>, double t, double) { return t; }});

  out.push_back({"exp_t",
                 "u = e^t",
                 {true, true, true, false, false},
                 0.0,
                 false,
                 [](std::span<const double>, double t, double) {
                   return std::exp(t);
                 }});

  out.push_back({"exp_diff",
                 "u = e^t - e^{-t}",
                 {false, true, true, true, false},
                 0.0,
                 false,
                 [](std::span<const double>, double t, double) {
                   return std::exp(t) - std::exp(-t);
                 }});

  out.push_back({"log_heat",
                 "u = log of the heat kernel, t >= 0.1",
                 {false, false, false, false, false},
                 0.1,
                 true,
                 [](std::span<const double> x, double t, double) {
                   return log_heat_kernel(x, t);
                 }});

  out.push_back({"log_abs",
                 "u(x) = log|x| clipped at the cell size",
                 {false, false, false, false, true},
                 0.0,
                 false,
                 [](std::span<const double> x, double, double clip) {
                   return clipped_log_abs(x, clip);
                 }});

  out.push_back({"log_abs_lifted",
                 "u(x) = log|x| - log(clip), shifted to be nonnegative",
                 {true, false, false, false, true},
                 0.0,
                 false,
                 [](std::span<const double> x, double, double clip) {
                   return clipped_log_abs(x, clip) - std::log(clip);
                 }});

  out.push_back({"step",
                 "u = 1 for t < 0, else 0",
                 {true, false, false, false, false},
                 0.0,
                 false,
                 [](std::span<const double>, double t, double) {
                   return t < 0.0 ? 1.0 : 0.0;
                 }});

  return out;
}

} // namespace

const std::vector<CorpusEntry>& list_entries() {
  static const std::vector<CorpusEntry> entries = make_entries();
  return entries;
}

const CorpusEntry& find_entry(const std::string& name) {
  for (const auto& e : list_entries())
    if (e.name == name) return e;
  throw ParameterError("unknown corpus entry: " + name);
}

SampledField evaluate_entry(const CorpusEntry& entry, const GridSpec& grid) {
  if (entry.t_bounded) {
    const double t0 = grid.domain.bounds.time.lo;
    if (t0 < entry.t_min - 1e-12)
      throw SamplingError("grid time range starts before t_min of entry " +
                          entry.name);
  }
  double clip = grid.spacing(0);
  for (std::size_t a = 1; a < grid.dim(); ++a)
    clip = std::min(clip, grid.spacing(a));
  const auto& eval = entry.eval;
  return sample(
      [&eval, clip](std::span<const double> x, double t) {
        return eval(x, t, clip);
      },
      grid);
}

} // namespace pbmo
