// Command-line driver: reads a JSON run configuration, executes one
// subcommand, and writes <command>.json (plus, for some commands, a
// <command>.csv table) into the output directory.
//
// Exit codes: 0 = success, 1 = a verified contract invariant failed,
// 2 = unusable configuration or input.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "parabmo/chains.hpp"
#include "parabmo/corpus.hpp"
#include "parabmo/czdecomp.hpp"
#include "parabmo/io.hpp"
#include "parabmo/jn.hpp"
#include "parabmo/maximal.hpp"
#include "parabmo/oneside1d.hpp"
#include "parabmo/seminorms.hpp"

using json = nlohmann::json;
using namespace pbmo;

namespace {

struct RunContext {
  json config;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string command;
};

[[noreturn]] void config_error(const std::string& field,
                               const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

json require(const json& cfg, const std::string& field) {
  if (!cfg.contains(field)) config_error(field, "missing");
  return cfg.at(field);
}

GridSpec parse_grid(const json& cfg) {
  const json g = require(cfg, "grid");
  Box b;
  const json space = require(g, "space");
  if (!space.is_array() || space.empty())
    config_error("grid.space", "expected a non-empty array of [lo, hi]");
  for (const auto& s : space) {
    if (!s.is_array() || s.size() != 2) config_error("grid.space", "bad pair");
    b.space.push_back({s[0].get<double>(), s[1].get<double>()});
  }
  const json time = require(g, "time");
  if (!time.is_array() || time.size() != 2)
    config_error("grid.time", "expected [lo, hi]");
  b.time = {time[0].get<double>(), time[1].get<double>()};
  std::vector<std::size_t> nx = require(g, "nx").get<std::vector<std::size_t>>();
  const std::size_t nt = require(g, "nt").get<std::size_t>();
  if (nx.size() != b.space.size())
    config_error("grid.nx", "dimension mismatch with grid.space");
  return GridSpec(Cylinder{b}, std::move(nx), nt);
}

/// Field source: a corpus entry name, a CSV file, or "random" (a smooth
/// trigonometric field drawn from the run seed).
SampledField parse_field(const RunContext& ctx) {
  const json& cfg = ctx.config;
  if (cfg.contains("field_csv"))
    return load_field(cfg.at("field_csv").get<std::string>());
  const std::string entry = require(cfg, "entry").get<std::string>();
  const GridSpec grid = parse_grid(cfg);
  if (entry == "random") {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double ax = 1.0 + 6.0 * U(rng), at = 1.0 + 4.0 * U(rng);
    const double ph = 6.283185307179586 * U(rng), amp = 0.5 + U(rng);
    return sample(
        [&](std::span<const double> x, double t) {
          double s = 0.0;
          for (double xi : x) s += xi;
          return 1.0 + amp * std::sin(ax * s + at * t + ph) +
                 0.3 * std::cos(3.0 * ax * s - at * t);
        },
        grid);
  }
  return evaluate_entry(find_entry(entry), grid);
}

RectangleFamily parse_family(const json& cfg) {
  const json f = require(cfg, "family");
  RectangleFamily fam;
  fam.stride = require(f, "stride").get<std::vector<std::size_t>>();
  fam.tstride = require(f, "tstride").get<std::size_t>();
  fam.ladder = require(f, "ladder").get<std::vector<double>>();
  fam.p = Exponent(f.value("p", 2.0));
  return fam;
}

MaximalConfig parse_maximal(const json& cfg) {
  const json l = require(cfg, "ladder");
  MaximalConfig mc;
  mc.gamma = cfg.value("gamma", 0.5);
  mc.ell_min = require(l, "ell_min").get<double>();
  mc.ell_max = require(l, "ell_max").get<double>();
  mc.ladder_ratio = l.value("ratio", std::pow(2.0, 0.25));
  return mc;
}

json witness_json(const std::optional<ParabolicRectangle>& w) {
  if (!w) return nullptr;
  json j;
  j["center_x"] = w->center_x;
  j["center_t"] = w->center_t;
  j["ell"] = w->ell;
  return j;
}

void write_report(const RunContext& ctx, json& report) {
  report["schema"] = 1;
  report["command"] = ctx.command;
  report["seed"] = ctx.seed;
  report["config"] = ctx.config;
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream os(ctx.out_dir / (ctx.command + ".json"));
  os << report.dump(2) << "\n";
}

void write_csv(const RunContext& ctx, const std::string& text) {
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream os(ctx.out_dir / (ctx.command + ".csv"));
  os << text;
}

// ------------------------------------------------------------ commands

int cmd_seminorm(const RunContext& ctx) {
  const SampledField f = parse_field(ctx);
  const RectangleFamily fam = parse_family(ctx.config);
  const double gamma = ctx.config.value("gamma", 0.5);
  const double lag = ctx.config.value("lag", 1.0 + gamma);
  const auto pb = pbmo_seminorm(view_of(f), fam, PbmoDirection::minus, gamma);
  const auto pbp = pbmo_seminorm(view_of(f), fam, PbmoDirection::plus, gamma);
  const auto bp =
      bmo_variant_seminorm(view_of(f), fam, gamma, lag, BmoVariantSide::plus);
  const auto bm = bmo_variant_seminorm(view_of(f), fam, gamma, lag,
                                       BmoVariantSide::minus_neg);
  json rep;
  rep["pbmo_minus"] = {{"value", pb.value},
                       {"constant", pb.constant},
                       {"family_size", pb.family_size},
                       {"witness", witness_json(pb.witness)}};
  rep["pbmo_plus"] = {{"value", pbp.value},
                      {"constant", pbp.constant},
                      {"family_size", pbp.family_size},
                      {"witness", witness_json(pbp.witness)}};
  rep["bmo_plus"] = {{"value", bp.value}, {"family_size", bp.family_size}};
  rep["bmo_minus_neg"] = {{"value", bm.value}, {"family_size", bm.family_size}};
  rep["gamma"] = gamma;
  rep["lag"] = lag;
  // Contract when the companion offset matches the upper part exactly.
  bool ok = true;
  if (lag == 1.0 + gamma) {
    ok = std::max(bp.value, bm.value) <= pb.value;
    rep["left_inequality_holds"] = ok;
  }
  write_report(ctx, rep);
  return ok ? 0 : 1;
}

int cmd_maximal(const RunContext& ctx) {
  const SampledField f = parse_field(ctx);
  const MaximalConfig mc = parse_maximal(ctx.config);
  const PointField m = maximal_star(f, mc);
  const auto dual = duality_check(f, mc);
  json rep;
  double mx = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < m.values.size(); ++i)
    if (m.defined[i]) {
      mx = any ? std::max(mx, m.values[i]) : m.values[i];
      any = true;
    }
  rep["max_value"] = any ? json(mx) : json(nullptr);
  rep["defined_points"] = m.values.size() - m.undefined_count();
  rep["undefined_points"] = m.undefined_count();
  rep["duality"] = {{"max_abs_deviation", dual.max_abs_deviation},
                    {"compared", dual.compared}};
  bool ok = dual.max_abs_deviation == 0.0;
  if (ctx.config.value("hl_check", false)) {
    const auto hl = hl_reduction_check(f, mc);
    rep["hl_reduction"] = {{"max_abs_deviation", hl.max_abs_deviation},
                          {"compared", hl.compared}};
    ok = ok && hl.max_abs_deviation == 0.0 && hl.compared > 0;
  }
  // CSV: one row per lattice point of the maximal field.
  std::ostringstream csv;
  csv << "spatial_index,time_index,value,defined\n";
  const std::size_t sx = m.grid.spatial_count();
  for (std::size_t t = 0; t < m.grid.nt; ++t)
    for (std::size_t s = 0; s < sx; ++s) {
      const std::size_t i = t * sx + s;
      csv << s << "," << t << ",";
      if (m.defined[i]) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", m.values[i]);
        csv << buf << ",1\n";
      } else {
        csv << ",0\n";
      }
    }
  write_csv(ctx, csv.str());
  rep["contract_ok"] = ok;
  write_report(ctx, rep);
  return ok ? 0 : 1;
}

int cmd_verify_bounded(const RunContext& ctx) {
  const auto entries =
      require(ctx.config, "entries").get<std::vector<std::string>>();
  const MaximalConfig mc = parse_maximal(ctx.config);
  const RectangleFamily fam = parse_family(ctx.config);
  json table = json::array();
  std::ostringstream csv;
  csv << "entry,seminorm_u,seminorm_Mu,ratio\n";
  bool ok = true;
  for (const auto& name : entries) {
    const auto& e = find_entry(name);
    json row;
    row["entry"] = name;
    GridSpec g = parse_grid(ctx.config);
    if (e.t_bounded && g.domain.bounds.time.lo < e.t_min) {
      Box b = g.domain.bounds;
      const double len = b.time.length();
      b.time = {e.t_min, e.t_min + len};
      g = GridSpec(Cylinder{b}, g.nx, g.nt);
      row["time_shifted_to"] = {b.time.lo, b.time.hi};
    }
    const SampledField f = evaluate_entry(e, g);
    const PointField m = maximal_star(f, mc);
    const double denom = pbmo_seminorm(view_of(f), fam).value;
    const double numer = pbmo_seminorm(m.view(), fam).value;
    row["seminorm_u"] = denom;
    row["seminorm_Mu"] = numer;
    if (denom == 0.0) {
      // Zero-seminorm input: the bound holds iff the output norm is 0 too.
      row["ratio"] = nullptr;
      row["zero_seminorm"] = true;
      if (numer != 0.0) ok = false;
      csv << name << "," << denom << "," << numer << ",\n";
    } else {
      const double ratio = numer / denom;
      row["ratio"] = ratio;
      if (!std::isfinite(ratio)) ok = false;
      csv << name << "," << denom << "," << numer << "," << ratio << "\n";
    }
    table.push_back(row);
  }
  json rep;
  rep["ratios"] = table;
  rep["all_finite"] = ok;
  write_csv(ctx, csv.str());
  write_report(ctx, rep);
  return ok ? 0 : 1;
}

int cmd_sandwich(const RunContext& ctx) {
  const SampledField f = parse_field(ctx);
  const MaximalConfig mc = parse_maximal(ctx.config);
  const PointField m = maximal_star(f, mc);
  const PointField up = maximal_star(f.pos_part(), mc);
  const PointField um = maximal_future_negative(f, mc);
  std::size_t compared = 0, violations = 0;
  double max_violation = 0.0;
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (!m.defined[i] || !up.defined[i] || !um.defined[i]) continue;
    ++compared;
    const double lo = std::max(um.values[i], up.values[i]);
    const double hi = um.values[i] + up.values[i];
    const double v =
        std::max(lo - m.values[i], m.values[i] - hi);
    if (v > 0.0) {
      ++violations;
      max_violation = std::max(max_violation, v);
    }
  }
  json rep;
  rep["compared"] = compared;
  rep["violations"] = violations;
  rep["max_violation"] = max_violation;
  write_report(ctx, rep);
  return violations == 0 && compared > 0 ? 0 : 1;
}

int cmd_dyadic(const RunContext& ctx) {
  const json& cfg = ctx.config;
  const double p = cfg.value("p", 2.0);
  const std::size_t depth = cfg.value("depth", std::size_t{8});
  Box root;
  const json r = require(cfg, "root");
  for (const auto& s : require(r, "space"))
    root.space.push_back({s[0].get<double>(), s[1].get<double>()});
  const json t = require(r, "time");
  root.time = {t[0].get<double>(), t[1].get<double>()};
  DyadicGrid grid(root, Exponent(p), depth);

  bool ok = true;
  json gens = json::array();
  const std::size_t enumerate_to =
      std::min(depth, cfg.value("enumerate_to", std::size_t{3}));
  for (std::size_t g = 1; g <= enumerate_to; ++g) {
    long double vol = 0.0L;
    for (const auto& id : grid.generation(g))
      vol += static_cast<long double>(grid.box(id).volume());
    const double err =
        std::abs(static_cast<double>(vol) - root.volume());
    if (err > 1e-12 * root.volume()) ok = false;
    gens.push_back({{"generation", g},
                    {"count", grid.generation_size(g)},
                    {"volume_error", err}});
  }
  const double lo_bound = std::exp2(-0.5), hi_bound = std::exp2(0.5);
  json dist = json::array();
  for (std::size_t i = 1; i <= depth; ++i) {
    const double d = std::exp2(p * static_cast<double>(i) -
                               static_cast<double>(grid.sequence().k[i - 1]));
    if (!(d > lo_bound - 1e-15 && d < hi_bound)) ok = false;
    dist.push_back(d);
  }
  std::ostringstream dump;
  grid.dump(dump, std::min(depth, cfg.value("dump_to", std::size_t{2})));
  write_csv(ctx, dump.str());
  json rep;
  rep["p"] = p;
  rep["depth"] = depth;
  rep["generations"] = gens;
  rep["distortion"] = dist;
  rep["contract_ok"] = ok;
  write_report(ctx, rep);
  return ok ? 0 : 1;
}

int cmd_cz(const RunContext& ctx) {
  const SampledField f = parse_field(ctx);
  const json& cfg = ctx.config;
  Box root;
  const json r = require(cfg, "root");
  for (const auto& s : require(r, "space"))
    root.space.push_back({s[0].get<double>(), s[1].get<double>()});
  const json t = require(r, "time");
  root.time = {t[0].get<double>(), t[1].get<double>()};
  DyadicGrid grid(root, Exponent(cfg.value("p", 2.0)),
                  cfg.value("depth", std::size_t{2}));
  CZConfig cz;
  cz.gamma = cfg.value("gamma", 0.5);
  cz.offset_factor = cfg.value("offset_factor", 2.0);
  cz.use_cover_for_stopping = cfg.value("use_cover_for_stopping", true);
  if (cfg.contains("lambda")) {
    cz.lambda = cfg.at("lambda").get<double>();
  } else {
    CZConfig probe = cz;
    probe.lambda = 1e9;
    cz.lambda = decompose(f, grid, probe).root_forward_mean +
                cfg.value("lambda_margin", 0.25);
  }
  const CZDecomposition dec = decompose(f, grid, cz);
  const CZReport rep = verify(dec, f, grid);
  const bool ok = rep.disjoint && rep.maximal &&
                  rep.reconstruction_error <= 1e-12 &&
                  (rep.stopped_count == 0 || rep.on_box_g_max <= cz.lambda);
  json out;
  out["lambda"] = cz.lambda;
  out["root_forward_mean"] = dec.root_forward_mean;
  out["stopped_count"] = rep.stopped_count;
  out["unresolved_count"] = dec.unresolved.size();
  out["reconstruction_error"] = rep.reconstruction_error;
  out["on_box_g_max"] = rep.on_box_g_max;
  out["off_box_u_max"] = rep.off_box_u_max;
  out["disjoint"] = rep.disjoint;
  out["maximal"] = rep.maximal;
  out["contract_ok"] = ok;
  json boxes = json::array();
  for (const auto& st : dec.stopped)
    boxes.push_back({{"time", {st.box.time.lo, st.box.time.hi}},
                     {"forward_mean", st.forward_mean},
                     {"parent_forward_mean", st.parent_forward_mean}});
  out["stopped"] = boxes;
  write_report(ctx, out);
  return ok ? 0 : 1;
}

int cmd_chain(const RunContext& ctx) {
  const SampledField f = parse_field(ctx);
  const json& cfg = ctx.config;
  const json s = require(cfg, "chain");
  ChainSpec spec;
  spec.center_x = require(s, "center_x").get<std::vector<double>>();
  spec.center_t = s.value("center_t", 0.0);
  spec.ell = s.value("ell", 1.0);
  spec.theta = s.value("theta", 0.5);
  spec.tau = require(s, "tau").get<double>();
  spec.v = require(s, "v").get<std::vector<double>>();
  spec.p = Exponent(s.value("p", 2.0));
  const Chain chain = build_chain(spec, f.grid().domain);
  const double bound = chain_oscillation(view_of(f), chain);
  const double direct = double_oscillation(view_of(f), chain.start,
                                           chain.target);
  const bool ok = bound >= direct - 1e-10;
  json rep;
  rep["blocks"] = chain.subchains.empty() ? chain.blocks.size() : 0;
  rep["subchains"] = chain.subchains.size();
  rep["epsilon"] = chain.epsilon;
  rep["k"] = chain.k;
  rep["l"] = chain.l;
  rep["delta"] = chain.delta;
  rep["chain_bound"] = bound;
  rep["direct_oscillation"] = direct;
  rep["sound"] = ok;
  std::ostringstream dump;
  dump_chain(dump, chain);
  write_csv(ctx, dump.str());
  write_report(ctx, rep);
  return ok ? 0 : 1;
}

int cmd_jn(const RunContext& ctx) {
  const SampledField f = parse_field(ctx);
  const RectangleFamily fam = parse_family(ctx.config);
  const double gamma = ctx.config.value("gamma", 0.5);
  const json c = require(ctx.config, "c_grid");
  const auto grid = default_c_grid(require(c, "lo").get<double>(),
                                   require(c, "hi").get<double>(),
                                   c.value("count", std::size_t{32}));
  const auto rep =
      jn_scan(view_of(f), fam, gamma, grid,
              ctx.config.value("moment_cap", 2.0));
  bool ok = true;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (rep.lower_moments[i] < rep.lower_moments[i - 1] ||
        rep.upper_moments[i] < rep.upper_moments[i - 1])
      ok = false;
  std::ostringstream csv;
  csv << "c,lower_moment,upper_moment\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    csv << grid[i] << "," << rep.lower_moments[i] << ","
        << rep.upper_moments[i] << "\n";
  write_csv(ctx, csv.str());
  json out;
  out["c_star"] = rep.c_star;
  out["c_star_lower"] = rep.c_star_lower;
  out["c_star_upper"] = rep.c_star_upper;
  out["moment_cap"] = rep.moment_cap;
  out["family_size"] = rep.family_size;
  out["moments_nondecreasing"] = ok;
  write_report(ctx, out);
  return ok ? 0 : 1;
}

Signal parse_signal(const RunContext& ctx) {
  const json s = require(ctx.config, "signal");
  const json d = require(s, "domain");
  const Interval dom{d[0].get<double>(), d[1].get<double>()};
  const std::size_t n = require(s, "n").get<std::size_t>();
  const std::string kind = require(s, "kind").get<std::string>();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t =
        dom.lo + (static_cast<double>(i) + 0.5) * dom.length() /
                     static_cast<double>(n);
    if (kind == "step")
      v[i] = t < 0.0 ? 1.0 : 0.0;
    else if (kind == "ramp")
      v[i] = t;
    else if (kind == "wave")
      v[i] = 1.0 + 0.8 * std::sin(5.0 * t) + 0.3 * std::cos(11.0 * t);
    else
      config_error("signal.kind", "unknown kind '" + kind + "'");
  }
  return Signal(dom, v);
}

int cmd_oneside(const RunContext& ctx) {
  const Signal u = parse_signal(ctx);
  const json& cfg = ctx.config;
  IntervalFamily fam;
  const json f = require(cfg, "family");
  fam.stride = require(f, "stride").get<std::size_t>();
  fam.widths = require(f, "widths").get<std::vector<double>>();
  const auto norm = os_bmo_norm(u, fam);
  const auto dnorm = os_double_norm(u, fam);
  bool ok = true;
  json rep;
  rep["bmo_norm"] = {{"value", norm.value},
                     {"witness", {norm.witness.lo, norm.witness.hi}},
                     {"family_size", norm.family_size}};
  rep["double_norm"] = {{"value", dnorm.value},
                        {"family_size", dnorm.family_size}};
  if (cfg.contains("maximal_ladder")) {
    const auto ladder =
        cfg.at("maximal_ladder").get<std::vector<double>>();
    const auto m = os_maximal(u, ladder);
    Signal mu(u.domain(), m.values);
    const auto mnorm = os_bmo_norm(mu, fam, m.defined);
    rep["maximal_norm"] = mnorm.value;
    rep["maximal_ratio"] = mnorm.value / norm.value;
  }
  if (cfg.contains("cz")) {
    const json z = cfg.at("cz");
    const json base = require(z, "base");
    const Interval b{base[0].get<double>(), base[1].get<double>()};
    double lambda;
    if (z.contains("lambda")) {
      lambda = z.at("lambda").get<double>();
    } else {
      lambda = os_cz(u, b, 1e9).root_forward_mean +
               z.value("lambda_margin", 0.25);
    }
    const OsCZ dec = os_cz(u, b, lambda);
    const OsCZReport vr = os_cz_verify(dec, u);
    const bool cz_ok = vr.disjoint && vr.maximal &&
                       vr.reconstruction_error <= 1e-12 &&
                       (vr.stopped_count == 0 || vr.on_box_g_max <= lambda);
    ok = ok && cz_ok;
    rep["cz"] = {{"lambda", lambda},
                 {"stopped_count", vr.stopped_count},
                 {"reconstruction_error", vr.reconstruction_error},
                 {"on_box_g_max", vr.on_box_g_max},
                 {"badpart_l2", os_cz_badpart_l2(dec, u)},
                 {"disjoint", vr.disjoint},
                 {"maximal", vr.maximal},
                 {"contract_ok", cz_ok}};
  }
  if (cfg.contains("interval_chain")) {
    const json ic = cfg.at("interval_chain");
    const auto tr = interval_chain(require(ic, "x").get<double>(),
                                   require(ic, "y").get<double>(),
                                   require(ic, "h").get<double>(), u);
    double total = 0.0;
    for (double th : tr.theta) total += th;
    bool chain_ok = total <= require(ic, "h").get<double>() + 1e-12;
    for (std::size_t i = 1; i < tr.steps.size(); ++i)
      if (!(tr.steps[i].h < tr.steps[i - 1].h)) chain_ok = false;
    ok = ok && chain_ok;
    rep["interval_chain"] = {{"k", tr.k},
                             {"steps", tr.steps.size()},
                             {"theta_total", total},
                             {"contract_ok", chain_ok}};
  }
  rep["contract_ok"] = ok;
  write_report(ctx, rep);
  return ok ? 0 : 1;
}

int cmd_diverge(const RunContext& ctx) {
  const json& cfg = ctx.config;
  const auto windows = require(cfg, "windows").get<std::vector<double>>();
  const std::size_t n = cfg.value("n", std::size_t{64});
  json table = json::array();
  std::ostringstream csv;
  csv << "T,seminorm\n";
  std::vector<double> values;
  for (double T : windows) {
    Box b;
    b.space.push_back({-1.0, 1.0});
    b.time = {-0.5 * T, 0.5 * T};
    const GridSpec g(Cylinder{b}, {n}, n);
    const SampledField f = sample(
        [](std::span<const double>, double t) {
          return std::abs(std::exp(t) - std::exp(-t));
        },
        g);
    RectangleFamily fam;
    fam.stride = {2};
    fam.tstride = 2;
    fam.ladder = {std::sqrt(0.15 * T), std::sqrt(0.30 * T)};
    fam.p = Exponent(2.0);
    const double v = pbmo_seminorm(view_of(f), fam).value;
    values.push_back(v);
    table.push_back({{"T", T}, {"seminorm", v}});
    csv << T << "," << v << "\n";
  }
  json rep;
  rep["windows"] = table;
  json ratios = json::array();
  for (std::size_t i = 1; i < values.size(); ++i)
    ratios.push_back(values[i] / values[i - 1]);
  rep["growth_ratios"] = ratios;
  write_csv(ctx, csv.str());
  write_report(ctx, rep);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"parabmo: parabolic BMO seminorms, one-sided maximal "
               "operators, and their verification suite"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  app.add_option("--config", config_path, "JSON run configuration")
      ->required();
  app.add_option("--out", out_dir, "output directory (default: env "
                                   "PARABMO_OUT or current directory)");
  app.add_option("--seed", seed, "seed for randomized inputs");
  app.add_option("--threads", threads, "worker thread budget");

  const char* names[] = {"seminorm", "maximal", "verify-bounded", "sandwich",
                         "dyadic",   "cz",      "chain",          "jn",
                         "oneside",  "diverge"};
  for (const char* n : names) app.add_subcommand(n)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.seed = seed;
  ctx.threads = threads;
  if (!out_dir.empty()) {
    ctx.out_dir = out_dir;
  } else if (const char* env = std::getenv("PARABMO_OUT")) {
    ctx.out_dir = env;
  } else {
    ctx.out_dir = ".";
  }

  try {
    std::ifstream is(config_path);
    if (!is) {
      std::fprintf(stderr, "error: cannot open config '%s'\n",
                   config_path.c_str());
      return 2;
    }
    ctx.config = json::parse(is);
  } catch (const json::exception& ex) {
    std::fprintf(stderr, "error: config parse failed: %s\n", ex.what());
    return 2;
  }

  try {
    if (ctx.command == "seminorm") return cmd_seminorm(ctx);
    if (ctx.command == "maximal") return cmd_maximal(ctx);
    if (ctx.command == "verify-bounded") return cmd_verify_bounded(ctx);
    if (ctx.command == "sandwich") return cmd_sandwich(ctx);
    if (ctx.command == "dyadic") return cmd_dyadic(ctx);
    if (ctx.command == "cz") return cmd_cz(ctx);
    if (ctx.command == "chain") return cmd_chain(ctx);
    if (ctx.command == "jn") return cmd_jn(ctx);
    if (ctx.command == "oneside") return cmd_oneside(ctx);
    if (ctx.command == "diverge") return cmd_diverge(ctx);
  } catch (const json::exception& ex) {
    std::fprintf(stderr, "error: bad config value: %s\n", ex.what());
    return 2;
  } catch (const ConfigError& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  } catch (const ParameterError& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  } catch (const Error& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 2; // unreachable: subcommand list is exhaustive
}
