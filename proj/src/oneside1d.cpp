#include "parabmo/oneside1d.hpp"

#include <algorithm>
#include <cmath>

#include "parabmo/common.hpp"

namespace pbmo {

namespace {
constexpr std::size_t kMin = 2; // samples an interval must hold
}

Signal::Signal(Interval domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)) {
  if (domain_.empty()) throw ParameterError("signal domain must be nonempty");
  if (values_.size() < 2) throw ParameterError("signal needs >= 2 samples");
  for (double v : values_)
    if (!std::isfinite(v)) throw ParameterError("signal values must be finite");
  pre_.assign(values_.size() + 1, 0.0L);
  prepos_.assign(values_.size() + 1, 0.0L);
  presq_.assign(values_.size() + 1, 0.0L);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const long double v = values_[i];
    pre_[i + 1] = pre_[i] + v;
    prepos_[i + 1] = prepos_[i] + (v > 0.0L ? v : 0.0L);
    presq_[i + 1] = presq_[i] + v * v;
  }
}

Signal::Range Signal::open_range(double a, double b) const {
  const double h = spacing();
  const double eps = 1e-9 * h;
  // centre(i) > a  <=>  i > (a - lo)/h - 1/2
  const double qa = (a - domain_.lo) / h - 0.5;
  const double qb = (b - domain_.lo) / h - 0.5;
  long lo = static_cast<long>(std::floor(qa + eps)) + 1;
  long hi = static_cast<long>(std::ceil(qb - eps)); // exclusive
  const auto n = static_cast<long>(values_.size());
  if (lo < 0) lo = 0;
  if (hi > n) hi = n;
  if (hi < lo) hi = lo;
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

double Signal::mean(Range r) const {
  if (r.count() < kMin)
    throw ResolutionError("interval holds too few samples", r.count());
  return static_cast<double>((pre_[r.hi] - pre_[r.lo]) /
                             static_cast<long double>(r.count()));
}

double Signal::pos_mean(Range r) const {
  if (r.count() < kMin)
    throw ResolutionError("interval holds too few samples", r.count());
  return static_cast<double>((prepos_[r.hi] - prepos_[r.lo]) /
                             static_cast<long double>(r.count()));
}

long double Signal::square_sum(Range r) const {
  return presq_[r.hi] - presq_[r.lo];
}

std::vector<double> Signal::samples(Range r) const {
  return {values_.begin() + static_cast<long>(r.lo),
          values_.begin() + static_cast<long>(r.hi)};
}

OsMaximal os_maximal(const Signal& u, const std::vector<double>& ladder) {
  if (ladder.empty()) throw ConfigError("empty window ladder");
  OsMaximal out;
  out.values.assign(u.size(), 0.0);
  out.defined.assign(u.size(), 0);
  bool any = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.coord(i);
    double best = 0.0;
    bool have = false;
    for (double h : ladder) {
      if (!(h > 0.0)) throw ConfigError("window lengths must be positive");
      if (x - h < u.domain().lo - 1e-9 * u.spacing()) continue;
      const auto r = u.open_range(x - h, x);
      if (r.count() < kMin) continue;
      const double m = u.mean(r);
      if (!have || m > best) best = m;
      have = true;
    }
    if (have) {
      out.values[i] = best;
      out.defined[i] = 1;
      any = true;
    }
  }
  if (!any) throw ConfigError("no evaluation point admits any window");
  return out;
}

namespace {

bool range_defined(std::span<const std::uint8_t> defined, Signal::Range r) {
  if (defined.empty()) return true;
  for (std::size_t i = r.lo; i < r.hi; ++i)
    if (!defined[i]) return false;
  return true;
}

template <typename Score>
IntervalEstimate family_sup(const Signal& u, const IntervalFamily& fam,
                            std::span<const std::uint8_t> defined,
                            Score&& score) {
  if (fam.widths.empty()) throw ConfigError("empty interval family");
  if (fam.stride == 0) throw ConfigError("family stride must be positive");
  const double h = u.spacing();
  IntervalEstimate best;
  bool have = false;
  for (double w : fam.widths) {
    for (std::size_t j = 0;; j += fam.stride) {
      const double a = u.domain().lo + static_cast<double>(j) * h;
      if (a + 2.0 * w > u.domain().hi + 1e-9 * h) break;
      const auto ri = u.open_range(a, a + w);
      const auto rp = u.open_range(a + w, a + 2.0 * w);
      if (ri.count() < kMin || rp.count() < kMin) continue;
      if (!range_defined(defined, ri) || !range_defined(defined, rp))
        continue;
      ++best.family_size;
      double companion = 0.0;
      const double v = score(ri, rp, companion);
      if (!have || v > best.value ||
          (v == best.value && a > best.witness.lo)) {
        best.value = v;
        best.witness = {a, a + w};
        best.constant = companion;
        have = true;
      }
    }
  }
  if (!have) throw ConfigError("no admissible interval in the family");
  return best;
}

} // namespace

IntervalEstimate os_bmo_norm(const Signal& u, const IntervalFamily& fam,
                             std::span<const std::uint8_t> defined) {
  return family_sup(
      u, fam, defined,
      [&](Signal::Range ri, Signal::Range rp, double& companion) {
        const long double m = (long double)u.mean(rp);
        companion = static_cast<double>(m);
        long double acc = 0.0L;
        for (double v : u.samples(ri)) {
          const long double d = (long double)v - m;
          if (d > 0.0L) acc += d;
        }
        return static_cast<double>(acc / (long double)ri.count());
      });
}

IntervalEstimate os_double_norm(const Signal& u, const IntervalFamily& fam,
                                std::span<const std::uint8_t> defined) {
  return family_sup(
      u, fam, defined,
      [&](Signal::Range ri, Signal::Range rp, double& companion) {
        companion = u.mean(rp);
        std::vector<double> ys = u.samples(rp);
        std::sort(ys.begin(), ys.end());
        std::vector<long double> pre(ys.size() + 1, 0.0L);
        for (std::size_t i = 0; i < ys.size(); ++i) pre[i + 1] = pre[i] + ys[i];
        long double total = 0.0L;
        for (double x : u.samples(ri)) {
          const auto it = std::lower_bound(ys.begin(), ys.end(), x);
          const auto k = static_cast<std::size_t>(it - ys.begin());
          total += (long double)x * k - pre[k];
        }
        return static_cast<double>(
            total / ((long double)ri.count() * (long double)rp.count()));
      });
}

IntervalChainTrace interval_chain(double x, double y, double h,
                                  const Signal& u, std::size_t max_iter) {
  if (!(y > x)) throw OrderError("interval chain needs y > x");
  if (!(h > 0.0)) throw ParameterError("interval chain needs h > 0");
  if (!(x > y - h))
    throw ParameterError("disjoint case (x <= y - h): no chain needed");

  IntervalChainTrace tr;
  const double d = y - x;
  tr.d = d;

  double cx = x, cy = y, ch = h;
  for (std::size_t iter = 0;; ++iter) {
    if (iter == max_iter) {
      tr.terminated_by = ChainTermination::max_iter;
      break;
    }
    // k is the positive integer with cx - k d in [cx - ch, cy - ch].
    auto k = static_cast<std::size_t>(std::ceil((ch - d) / d - 1e-12));
    if (k == 0) k = 1;
    if (iter == 0) {
      tr.k = k;
      for (std::size_t j = 1; j <= k; ++j)
        tr.intervals.push_back({cx - static_cast<double>(j) * d,
                                cx - static_cast<double>(j - 1) * d});
    }
    if (k == 1) { // equivalently d >= ch / 2: bisection case applies
      tr.steps.push_back({cx, cy, ch, k, 0.0});
      tr.terminated_by = ChainTermination::case_k1;
      break;
    }
    const double theta = static_cast<double>(k - 1) * d;
    tr.steps.push_back({cx, cy, ch, k, theta});
    tr.theta.push_back(theta);
    ch -= theta;
    cx -= theta;
    cy = cx + d;
    // Stop when the pair can no longer be resolved on the grid.
    if (u.open_range(cx - ch, cx).count() < kMin) {
      tr.terminated_by = ChainTermination::convergence;
      break;
    }
  }
  return tr;
}

namespace {

struct DyadicInterval {
  Interval box;
  std::size_t generation = 0;
};

double forward_mean_1d(const Signal& u, const Interval& j) {
  const double w = j.length();
  const auto r = u.open_range(j.hi, j.hi + w);
  return u.mean(r);
}

void descend_1d(const Signal& u, double lambda, const Interval& j,
                double parent_mean, std::size_t depth_left, OsCZ& out) {
  const double mid = 0.5 * (j.lo + j.hi);
  for (const Interval half : {Interval{j.lo, mid}, Interval{mid, j.hi}}) {
    const double w = half.length();
    if (half.hi + w > u.domain().hi + 1e-9 * u.spacing()) continue; // fwd exits
    const auto fr = u.open_range(half.hi, half.hi + w);
    if (fr.count() < kMin) continue;
    const double m = u.mean(fr);
    if (m > lambda) {
      out.stopped.push_back({half, m, parent_mean});
    } else if (depth_left > 0) {
      descend_1d(u, lambda, half, m, depth_left - 1, out);
    }
  }
}

} // namespace

OsCZ os_cz(const Signal& u, const Interval& base, double lambda) {
  if (base.empty()) throw ParameterError("base interval must be nonempty");
  const double w = base.length();
  const Interval region{base.lo - w, base.hi};
  const double tol = 1e-9 * u.spacing();
  if (region.lo < u.domain().lo - tol ||
      base.hi + 2.0 * w > u.domain().hi + tol)
    throw DomainError("region or its forward companions leave the domain");

  OsCZ out;
  out.lambda = lambda;
  out.region = region;
  const auto fr = u.open_range(region.hi, region.hi + region.length());
  out.root_forward_mean = u.mean(fr);
  if (!(lambda > out.root_forward_mean))
    throw ParameterError("lambda must exceed the root forward average");

  // Depth: subdivide while halves keep >= 2*kMin samples.
  std::size_t depth = 0;
  double len = region.length();
  while (len / 2.0 > 4.0 * u.spacing() * static_cast<double>(kMin)) {
    len /= 2.0;
    ++depth;
  }
  descend_1d(u, lambda, region, out.root_forward_mean, depth, out);

  out.g = u.values();
  out.in_region.assign(u.size(), 0);
  const auto rr = u.open_range(region.lo, region.hi);
  for (std::size_t i = rr.lo; i < rr.hi; ++i) out.in_region[i] = 1;
  for (const auto& st : out.stopped) {
    const auto r = u.open_range(st.box.lo, st.box.hi);
    for (std::size_t i = r.lo; i < r.hi; ++i)
      out.g[i] = st.parent_forward_mean;
  }
  return out;
}

OsCZReport os_cz_verify(const OsCZ& dec, const Signal& u) {
  OsCZReport rep;
  rep.stopped_count = dec.stopped.size();
  for (std::size_t i = 0; i < dec.stopped.size() && rep.disjoint; ++i)
    for (std::size_t j = i + 1; j < dec.stopped.size(); ++j)
      if (!intersect(dec.stopped[i].box, dec.stopped[j].box).empty()) {
        rep.disjoint = false;
        break;
      }
  for (const auto& st : dec.stopped) {
    if (!(forward_mean_1d(u, st.box) > dec.lambda)) rep.maximal = false;
    if (!(st.parent_forward_mean <= dec.lambda)) rep.maximal = false;
  }
  std::vector<std::uint8_t> claimed(u.size(), 0);
  for (const auto& st : dec.stopped) {
    const auto r = u.open_range(st.box.lo, st.box.hi);
    for (std::size_t i = r.lo; i < r.hi; ++i) claimed[i] = 1;
  }
  bool first_on = true, first_off = true;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!dec.in_region[i]) continue;
    const double v = u.values()[i];
    const double b = claimed[i] ? v - dec.g[i] : 0.0;
    rep.reconstruction_error =
        std::max(rep.reconstruction_error, std::abs(v - (b + dec.g[i])));
    if (claimed[i]) {
      rep.on_box_g_max =
          first_on ? dec.g[i] : std::max(rep.on_box_g_max, dec.g[i]);
      first_on = false;
    } else {
      rep.off_box_u_max = first_off ? v : std::max(rep.off_box_u_max, v);
      first_off = false;
    }
  }
  return rep;
}

double os_cz_badpart_l2(const OsCZ& dec, const Signal& u) {
  long double total = 0.0L;
  const long double h = u.spacing();
  for (const auto& st : dec.stopped) {
    const auto r = u.open_range(st.box.lo, st.box.hi);
    for (std::size_t i = r.lo; i < r.hi; ++i) {
      const long double b = (long double)u.values()[i] -
                            (long double)st.parent_forward_mean;
      if (b > 0.0L) total += b * b * h;
    }
  }
  return static_cast<double>(total);
}

} // namespace pbmo
