// Command-line front end: one subcommand per library operation, file-based
// artifacts only.  Every run writes <out>.manifest.json echoing the fully
// resolved configuration plus the library version, and --from-manifest replays
// a recorded run so its CSV outputs come back byte for byte.
// Exit codes: 0 success, 1 input or resource errors, 2 repro mismatch.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "greendyn/errors.hpp"
#include "greendyn/greens.hpp"
#include "greendyn/indeterminacy.hpp"
#include "greendyn/io.hpp"
#include "greendyn/liouville.hpp"
#include "greendyn/map.hpp"
#include "greendyn/regularity.hpp"
#include "greendyn/scenarios.hpp"
#include "greendyn/torus.hpp"
#include "greendyn/version.hpp"
#include "json.hpp"

namespace {

using namespace greendyn;
using nlohmann::json;

// Fully resolved run configuration.  Serialized into the manifest verbatim, so
// a manifest round-trips to an identical run; -1 / empty strings are sentinels
// filled with per-subcommand defaults before dispatch.
struct RunConfig {
  std::string subcommand;
  std::string map_file, scenario, params;
  int n = -1;          // iterates / series depth / iteration cap
  int depth = -1;      // backward-orbit or preimage depth
  int res = -1;        // grid resolution per axis
  std::string window;  // "x0,x1,y0,y1"
  int chart = 0;
  std::string slice = "0";
  double tol = kIndetTol;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "out";
  bool assume_stable = false;
  std::string z = "0";           // evaluation point, chart coordinate
  std::string c = "0";           // quadratic-family parameter
  std::string sampler = "grid";  // chi-top: grid | julia
  int samples = -1;              // julia branches / beta-est seeds per point
  std::string family = "holder";
  int count = 80;      // modulus-fit pairs per scale
  std::string scales;  // comma list; empty = half-decade ladder 1e-7..1e-1
  std::string anchors;  // semicolon list of complex anchors
  double shift = 0;
  double lambda = 0;  // 0 = map degree (log-space mode: 2)
  int q = 2;
  std::string schedule;  // const:H | doubleexp
  int J = 4;
  int precision = 256;
  int d = 3;
  int zeta_order = 4;
  std::string a = "0,0,0,0";  // torus base point, basis coordinates
  std::string dump_map;
  std::string repro_name;
};

json config_to_json(const RunConfig& c) {
  return json{{"subcommand", c.subcommand},
              {"map", c.map_file},
              {"scenario", c.scenario},
              {"params", c.params},
              {"n", c.n},
              {"depth", c.depth},
              {"res", c.res},
              {"window", c.window},
              {"chart", c.chart},
              {"slice", c.slice},
              {"tol", c.tol},
              {"seed", c.seed},
              {"threads", c.threads},
              {"out", c.out},
              {"assume_stable", c.assume_stable},
              {"z", c.z},
              {"c", c.c},
              {"sampler", c.sampler},
              {"samples", c.samples},
              {"family", c.family},
              {"count", c.count},
              {"scales", c.scales},
              {"anchors", c.anchors},
              {"shift", c.shift},
              {"lambda", c.lambda},
              {"q", c.q},
              {"schedule", c.schedule},
              {"J", c.J},
              {"precision", c.precision},
              {"d", c.d},
              {"zeta_order", c.zeta_order},
              {"a", c.a},
              {"dump_map", c.dump_map},
              {"repro", c.repro_name}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.subcommand = j.value("subcommand", std::string());
  c.map_file = j.value("map", std::string());
  c.scenario = j.value("scenario", std::string());
  c.params = j.value("params", std::string());
  c.n = j.value("n", -1);
  c.depth = j.value("depth", -1);
  c.res = j.value("res", -1);
  c.window = j.value("window", std::string());
  c.chart = j.value("chart", 0);
  c.slice = j.value("slice", std::string("0"));
  c.tol = j.value("tol", kIndetTol);
  c.seed = j.value("seed", std::uint64_t{1});
  c.threads = j.value("threads", 1);
  c.out = j.value("out", std::string("out"));
  c.assume_stable = j.value("assume_stable", false);
  c.z = j.value("z", std::string("0"));
  c.c = j.value("c", std::string("0"));
  c.sampler = j.value("sampler", std::string("grid"));
  c.samples = j.value("samples", -1);
  c.family = j.value("family", std::string("holder"));
  c.count = j.value("count", 80);
  c.scales = j.value("scales", std::string());
  c.anchors = j.value("anchors", std::string());
  c.shift = j.value("shift", 0.0);
  c.lambda = j.value("lambda", 0.0);
  c.q = j.value("q", 2);
  c.schedule = j.value("schedule", std::string());
  c.J = j.value("J", 4);
  c.precision = j.value("precision", 256);
  c.d = j.value("d", 3);
  c.zeta_order = j.value("zeta_order", 4);
  c.a = j.value("a", std::string("0,0,0,0"));
  c.dump_map = j.value("dump_map", std::string());
  c.repro_name = j.value("repro", std::string());
  return c;
}

// ---- small parsers ---------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + sep) {
    if (ch == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw invalid_parameter("");
    return v;
  } catch (const std::exception&) {
    throw invalid_parameter("bad number '" + s + "'");
  }
}

void parse_window(const std::string& w, GridSpec& spec) {
  auto parts = split(w, ',');
  if (parts.size() != 4) throw invalid_parameter("--window wants x0,x1,y0,y1");
  spec.x0 = parse_double(parts[0]);
  spec.x1 = parse_double(parts[1]);
  spec.y0 = parse_double(parts[2]);
  spec.y1 = parse_double(parts[3]);
  if (!(spec.x1 > spec.x0) || !(spec.y1 > spec.y0))
    throw invalid_parameter("--window wants x0 < x1 and y0 < y1");
}

std::vector<double> default_scales() {
  std::vector<double> s;
  for (int k = 0; k <= 12; ++k) s.push_back(1e-7 * std::pow(10.0, 0.5 * k));
  return s;
}

std::vector<double> parse_scale_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(part));
  if (out.empty()) throw invalid_parameter("--scales wants a comma list of lengths");
  return out;
}

std::vector<Cplx> parse_anchor_list(const std::string& s) {
  std::vector<Cplx> out;
  for (const auto& part : split(s, ';')) out.push_back(parse_complex(part));
  return out;
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw invalid_parameter("bad rational '" + s + "'");
  }
}

TorusPoint parse_torus_point(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 4) throw invalid_parameter("--a wants a1,b1,a2,b2");
  TorusPoint p;
  p.a1 = parse_rational(parts[0]);
  p.b1 = parse_rational(parts[1]);
  p.a2 = parse_rational(parts[2]);
  p.b2 = parse_rational(parts[3]);
  return p;
}

Schedule parse_schedule(const std::string& s) {
  if (s == "doubleexp") return schedule_doubleexp();
  if (s.rfind("const:", 0) == 0) return schedule_const(parse_double(s.substr(6)));
  throw invalid_parameter("unknown schedule '" + s + "' (want const:H or doubleexp)");
}

ModulusFamily parse_family(const std::string& s) {
  if (s == "holder" || s == "HOLDER") return ModulusFamily::HOLDER;
  if (s == "h_alpha" || s == "H_ALPHA") return ModulusFamily::H_ALPHA;
  if (s == "phi_alpha" || s == "PHI_ALPHA") return ModulusFamily::PHI_ALPHA;
  throw invalid_parameter("unknown family '" + s + "' (want holder, h_alpha or phi_alpha)");
}

std::string cplx_str(Cplx v) {
  std::string s = format_double(v.real());
  if (v.imag() != 0) {
    if (v.imag() > 0) s += "+";
    s += format_double(v.imag()) + "i";
  }
  return s;
}

std::string point_str(const ProjectivePoint& p) {
  std::string s = "[";
  for (int i = 0; i <= p.dim; ++i) s += (i ? " : " : "") + cplx_str(p.c[i]);
  return s + "]";
}

std::string verdict_str(const StabilityReport& r) {
  switch (r.verdict) {
    case StabilityVerdict::STABLE_UP_TO_N:
      return "STABLE-UP-TO-" + std::to_string(r.n_checked);
    case StabilityVerdict::VIOLATED:
      return "VIOLATED(" + std::to_string(r.violated_at) + ")";
    default:
      return "INCONCLUSIVE";
  }
}

std::string verdict_str(RecurrenceVerdict v) {
  switch (v) {
    case RecurrenceVerdict::CONVERGENT_TREND:
      return "CONVERGENT-TREND";
    case RecurrenceVerdict::DIVERGENT_TREND:
      return "DIVERGENT-TREND";
    default:
      return "INCONCLUSIVE";
  }
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- map resolution and the stability gate ---------------------------------

struct ResolvedMap {
  MapFile file;
  std::optional<Scenario> scen;  // present when resolved through the registry
  double lambda() const { return scen ? scen->lambda : file.fmap.degree(); }
};

ResolvedMap resolve_map(const RunConfig& cfg) {
  if (!cfg.map_file.empty() && !cfg.scenario.empty())
    throw invalid_parameter("give either --map or --scenario, not both");
  ResolvedMap rm;
  if (!cfg.map_file.empty()) {
    rm.file = map_from_json(read_text_file(cfg.map_file));
    // A delegating file came back with the canonical params echo; rebuild the
    // scenario to recover the side data (lambda, known indeterminacy sets).
    if (!rm.file.scenario.empty())
      rm.scen = build_scenario(rm.file.scenario, parse_params(rm.file.params));
    return rm;
  }
  if (cfg.scenario.empty())
    throw invalid_parameter("need a map: --map FILE or --scenario NAME");
  Scenario s = build_scenario(cfg.scenario, parse_params(cfg.params));
  rm.file.scenario = s.name;
  rm.file.params = s.params;
  rm.file.exact = s.exact_map.has_value();
  rm.file.fmap = s.map;
  if (s.exact_map) rm.file.emap = *s.exact_map;
  rm.file.has_inverse = s.inverse.has_value();
  if (s.inverse) rm.file.finv = *s.inverse;
  if (s.exact_inverse) rm.file.einv = *s.exact_inverse;
  rm.scen = std::move(s);
  return rm;
}

std::vector<ProjectivePoint> indet_set(const ResolvedMap& rm) {
  if (rm.scen && !rm.scen->known_indet.empty()) return rm.scen->known_indet;
  return indeterminacy_points(rm.file.fmap);
}

// Green computations take lambda equal to the algebraic degree, which is the
// dynamical degree only for 1-stable maps; refuse them on P^2 until some
// stability evidence exists.  Routes, in order: a structurally stable
// scenario, the backward-orbit check through the inverse, the exact degree
// sequence.  --assume-stable overrides; the route lands in the manifest.
std::string require_stability(const RunConfig& cfg, const ResolvedMap& rm) {
  if (rm.file.fmap.dim == 1) return "not-required";
  if (cfg.assume_stable) return "assumed";
  if (rm.scen && rm.scen->name == "WEAKLY_REGULAR") {
    // The line at infinity contracts to a fixed point off the indeterminacy
    // set (checked when the scenario was built), which blocks degree drops.
    return "passed-structural";
  }
  StabilityReport rep;
  if (rm.file.has_inverse) {
    rep = stability_check(rm.file.fmap, rm.file.finv, 20, cfg.tol);
  } else if (rm.file.exact) {
    rep = stability_check_degrees(rm.file.emap, 3);
  } else {
    throw invalid_parameter(
        "cannot verify 1-stability (float coefficients, no inverse); "
        "rerun with --assume-stable to force lambda = deg f");
  }
  if (rep.verdict != StabilityVerdict::STABLE_UP_TO_N)
    throw invalid_parameter("stability check " + verdict_str(rep) + " via " + rep.route +
                            "; rerun with --assume-stable to force lambda = deg f");
  return "passed-" + rep.route;
}

// ---- manifest ---------------------------------------------------------------

json resolved_info(const ResolvedMap& rm) {
  json r{{"dim", rm.file.fmap.dim},
         {"degree", rm.file.fmap.degree()},
         {"exact", rm.file.exact},
         {"has_inverse", rm.file.has_inverse},
         {"lambda", rm.lambda()}};
  if (rm.scen) {
    r["scenario"] = rm.scen->name;
    r["params"] = rm.scen->params;
  }
  return r;
}

void write_manifest(const RunConfig& cfg, const std::vector<std::string>& outputs,
                    const json& resolved = json(), const std::string& gate = "not-required",
                    const std::string& cache = "off") {
  json m{{"version", kVersion},       {"subcommand", cfg.subcommand},
         {"config", config_to_json(cfg)}, {"stability_gate", gate},
         {"cache", cache},            {"outputs", outputs}};
  if (!resolved.is_null()) m["resolved"] = resolved;
  write_text_file(cfg.out + ".manifest.json", m.dump(2) + "\n");
}

// ---- subcommand handlers ----------------------------------------------------

int run_degree_seq(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  if (!rm.file.exact)
    throw invalid_parameter(
        "degree-seq composes iterates symbolically and needs exact coefficients");
  // GREENDYN_CACHE keys the memoized composition results by the canonical
  // map JSON plus the iterate count.
  std::string cache_state = "off", cpath;
  std::vector<int> degs;
  if (const char* dir = std::getenv("GREENDYN_CACHE"); dir && *dir) {
    MapFile keyed;
    keyed.exact = true;
    keyed.emap = rm.file.emap;
    cpath = std::string(dir) + "/degree-seq-" +
            fnv1a_hex(map_to_json(keyed) + "#" + std::to_string(cfg.n)) + ".json";
    cache_state = "miss";
    try {
      json jc = json::parse(read_text_file(cpath));
      if (jc.value("n", -1) == cfg.n) {
        degs = jc.at("degrees").get<std::vector<int>>();
        cache_state = "hit";
      }
    } catch (const std::exception&) {
      // unreadable or stale entry: fall through and recompute
    }
  }
  if (degs.empty()) {
    degs = degree_sequence(rm.file.emap, cfg.n);
    if (!cpath.empty()) {
      std::filesystem::create_directories(std::filesystem::path(cpath).parent_path());
      write_text_file(cpath, json{{"n", cfg.n}, {"degrees", degs}}.dump() + "\n");
    }
  }
  std::vector<std::vector<std::string>> rows;
  std::string seq;
  for (std::size_t i = 0; i < degs.size(); ++i) {
    rows.push_back({std::to_string(i + 1), std::to_string(degs[i])});
    seq += (i ? "," : "") + std::to_string(degs[i]);
  }
  write_csv(cfg.out + ".degrees.csv", "n,degree", rows);
  std::cout << "d-sequence [" << seq << "]\n";
  write_manifest(cfg, {cfg.out + ".degrees.csv"}, resolved_info(rm), "not-required", cache_state);
  return 0;
}

int run_indet(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  auto pts = indeterminacy_points(rm.file.fmap);
  int dim = rm.file.fmap.dim;
  std::string header = "index";
  for (int i = 0; i <= dim; ++i)
    header += ",coord" + std::to_string(i) + "_re,coord" + std::to_string(i) + "_im";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (int i = 0; i <= dim; ++i) {
      row.push_back(format_double(pts[k].c[i].real()));
      row.push_back(format_double(pts[k].c[i].imag()));
    }
    rows.push_back(std::move(row));
  }
  write_csv(cfg.out + ".indet.csv", header, rows);
  std::vector<std::string> outputs{cfg.out + ".indet.csv"};
  std::cout << "indeterminacy points: " << pts.size() << "\n";
  for (const auto& p : pts) std::cout << "  " << point_str(p) << "\n";
  if (rm.file.exact) {
    auto ex = indeterminacy_points_exact(rm.file.emap);
    std::cout << "exact solver: " << ex.size() << " point" << (ex.size() == 1 ? "" : "s") << "\n";
  }
  if (!cfg.dump_map.empty()) {
    write_text_file(cfg.dump_map, map_to_json(rm.file));
    outputs.push_back(cfg.dump_map);
  }
  write_manifest(cfg, outputs, resolved_info(rm));
  return 0;
}

int run_stability(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  StabilityReport rep;
  if (rm.file.has_inverse) {
    rep = stability_check(rm.file.fmap, rm.file.finv, cfg.n, cfg.tol);
  } else if (rm.file.exact) {
    rep = stability_check_degrees(rm.file.emap, cfg.n);
  } else {
    throw invalid_parameter(
        "stability needs an inverse (backward-orbit route) or exact coefficients (degree route)");
  }
  write_csv(cfg.out + ".stability.csv", "route,verdict,n_checked,violated_at,min_dist,min_dist_n",
            {{rep.route, verdict_str(rep), std::to_string(rep.n_checked),
              std::to_string(rep.violated_at), format_double(rep.min_dist),
              std::to_string(rep.min_dist_n)}});
  std::cout << verdict_str(rep) << " route=" << rep.route;
  if (rep.route == "backward-orbit")
    std::cout << " min_dist=" << format_double(rep.min_dist) << " at n=" << rep.min_dist_n;
  std::cout << "\n";
  write_manifest(cfg, {cfg.out + ".stability.csv"}, resolved_info(rm));
  return 0;
}

int run_green_eval(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  std::string gate = require_stability(cfg, rm);
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  ProjectivePoint x =
      chart_point(rm.file.fmap.dim, cfg.chart, parse_complex(cfg.z), parse_complex(cfg.slice));
  std::vector<ProjectivePoint> indet;
  if (rm.file.fmap.dim == 2) indet = indet_set(rm);
  GreenSeries s = green_series(rm.file.fmap, x, cfg.n, cfg.shift, indet, cfg.tol);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t j = 0; j < s.partials.size(); ++j) {
    std::vector<std::string> row{std::to_string(j), format_double(s.partials[j])};
    if (j < s.orbit.size()) {
      row.push_back(format_double(s.orbit[j].gamma_shifted));
      row.push_back(format_double(s.orbit[j].dist_indet));
    } else {
      row.push_back("");
      row.push_back("");
    }
    rows.push_back(std::move(row));
  }
  write_csv(cfg.out + ".green.csv", "j,partial,gamma_shifted,dist_indet", rows);
  std::cout << "g_" << s.partials.size() - 1 << " = " << format_double(s.partials.back())
            << " at " << point_str(x) << " (lambda=" << format_double(s.lambda) << ")\n";
  if (s.truncated)
    std::cout << "orbit hit indeterminacy at step " << s.truncated_at << "; series truncated\n";
  write_manifest(cfg, {cfg.out + ".green.csv"}, resolved_info(rm), gate);
  return 0;
}

int run_green_heatmap(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  std::string gate = require_stability(cfg, rm);
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  if (cfg.res < 1) throw invalid_parameter("--res must be positive");
  if (cfg.threads < 1) throw invalid_parameter("--threads must be positive");
  GridSpec spec;
  parse_window(cfg.window, spec);
  spec.nx = spec.ny = cfg.res;
  spec.chart = cfg.chart;
  spec.slice = parse_complex(cfg.slice);
  GreenOptions opt;
  opt.n = cfg.n;
  opt.shift = cfg.shift;
  opt.tol = cfg.tol;
  auto values = green_grid(rm.file.fmap, spec, opt, cfg.threads);
  write_heatmap_csv(cfg.out + ".heatmap.csv", spec, values);
  write_heatmap_pgm(cfg.out + ".heatmap.pgm", cfg.out + ".heatmap.pgm.txt", spec.nx, spec.ny,
                    values);
  long long nans = std::count_if(values.begin(), values.end(),
                                 [](double v) { return !std::isfinite(v); });
  std::cout << "heatmap " << spec.nx << "x" << spec.ny << " chart " << spec.chart
            << " finite=" << static_cast<long long>(values.size()) - nans << " nan=" << nans
            << "\n";
  write_manifest(cfg,
                 {cfg.out + ".heatmap.csv", cfg.out + ".heatmap.pgm", cfg.out + ".heatmap.pgm.txt"},
                 resolved_info(rm), gate);
  return 0;
}

int run_affine_green(const RunConfig& cfg) {
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  if (cfg.res < 1) throw invalid_parameter("--res must be positive");
  Cplx c = parse_complex(cfg.c);
  GridSpec spec;
  parse_window(cfg.window, spec);
  spec.nx = spec.ny = cfg.res;
  std::vector<double> values(static_cast<std::size_t>(spec.nx) * spec.ny);
  bool have_oracle = c.imag() == 0 && (c.real() == 0.0 || c.real() == -2.0);
  double maxdev = 0;
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 0; ix < spec.nx; ++ix) {
      double xr = spec.nx == 1 ? spec.x0 : spec.x0 + (spec.x1 - spec.x0) * ix / (spec.nx - 1);
      double yi = spec.ny == 1 ? spec.y0 : spec.y0 + (spec.y1 - spec.y0) * iy / (spec.ny - 1);
      double v = affine_green(c, Cplx(xr, yi), cfg.n);
      values[static_cast<std::size_t>(iy) * spec.nx + ix] = v;
      if (have_oracle) maxdev = std::max(maxdev, std::abs(v - oracle_green(c, Cplx(xr, yi))));
    }
  write_heatmap_csv(cfg.out + ".affine.csv", spec, values);
  std::cout << "affine green c=" << cplx_str(c) << " grid " << spec.nx << "x" << spec.ny << "\n";
  if (have_oracle) std::cout << "max |value - closed form| = " << format_double(maxdev) << "\n";
  write_manifest(cfg, {cfg.out + ".affine.csv"});
  return 0;
}

int run_chi_top(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  ChiTopSampler smp;
  smp.seed = cfg.seed;
  if (cfg.sampler == "grid") {
    smp.kind = ChiTopSampler::GRID;
    smp.resolution = cfg.res;
  } else if (cfg.sampler == "julia") {
    smp.kind = ChiTopSampler::JULIA;
    smp.samples = cfg.samples;
    smp.c = parse_complex(cfg.c);
    // A QUADRATIC scenario pins the parameter; keep the sampler consistent.
    if (rm.scen && rm.scen->name == "QUADRATIC")
      smp.c = parse_complex(parse_params(rm.scen->params).at("c"));
  } else {
    throw invalid_parameter("--sampler wants grid or julia");
  }
  ChiTopResult r = chi_top(rm.file.fmap, cfg.n, smp);
  write_csv(cfg.out + ".chitop.csv", "estimate,n,orbits_used,orbits_skipped",
            {{format_double(r.estimate), std::to_string(r.n), std::to_string(r.orbits_used),
              std::to_string(r.orbits_skipped)}});
  std::cout << "chi_top = " << format_double(r.estimate) << " (n=" << r.n
            << ", orbits=" << r.orbits_used << ", skipped=" << r.orbits_skipped << ")\n";
  write_manifest(cfg, {cfg.out + ".chitop.csv"}, resolved_info(rm));
  return 0;
}

int run_modulus_fit(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  std::string gate = require_stability(cfg, rm);
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  if (cfg.count < 1) throw invalid_parameter("--count must be positive");
  GridSpec w;
  parse_window(cfg.window, w);
  PairRegion region;
  region.chart = cfg.chart;
  region.x0 = w.x0;
  region.x1 = w.x1;
  region.y0 = w.y0;
  region.y1 = w.y1;
  region.slice = parse_complex(cfg.slice);
  region.anchors = parse_anchor_list(cfg.anchors);
  auto scales = cfg.scales.empty() ? default_scales() : parse_scale_list(cfg.scales);
  PairSampleSet set = sample_pairs(rm.file.fmap, region, cfg.n, cfg.count, scales, cfg.seed);
  ModulusFit fit = fit_modulus(set, parse_family(cfg.family));
  write_pairs_csv(cfg.out + ".pairs.csv", set);
  write_text_file(cfg.out + ".fit.txt", fit_report_line(fit) + "\n");
  std::cout << fit_report_line(fit) << "\n";
  std::cout << "pairs=" << set.entries.size() << " attempts=" << set.attempts << "\n";
  write_manifest(cfg, {cfg.out + ".pairs.csv", cfg.out + ".fit.txt"}, resolved_info(rm), gate);
  return 0;
}

int run_beta_est(const RunConfig& cfg) {
  ResolvedMap rm = resolve_map(cfg);
  if (cfg.n < 1) throw invalid_parameter("--n must be positive");
  if (cfg.samples < 1) throw invalid_parameter("--samples must be positive");
  auto targets = indet_set(rm);
  if (targets.empty()) throw invalid_parameter("beta-est needs a nonempty indeterminacy set");
  // Deterministic seeds fanned around each target: radii 0.0016..0.05 keep
  // every seed inside the d < 0.1 near region the estimator regresses over.
  std::vector<ProjectivePoint> seeds;
  int m = 0;
  for (const auto& t : targets)
    for (int k = 0; k < cfg.samples; ++k, ++m) {
      ProjectivePoint p = t;
      int top = 0;
      for (int i = 1; i <= p.dim; ++i)
        if (std::abs(p.c[i]) > std::abs(p.c[top])) top = i;
      double r = 0.05 * std::pow(10.0, -0.5 * (k % 4));
      double phi = 2.399963229728653 * m;  // golden-angle sweep
      p.c[(top + 1) % (p.dim + 1)] += r * std::exp(Cplx(0, phi));
      if (p.dim == 2) p.c[(top + 2) % 3] += 0.5 * r * std::exp(Cplx(0, phi + 2.0));
      p.normalize();
      seeds.push_back(p);
    }
  BetaEstimate be = beta_estimate(rm.file.fmap, targets, seeds, cfg.n);
  write_csv(cfg.out + ".beta.csv", "beta_hat,raw_slope,offset,scatter_rms,steps_used",
            {{format_double(be.beta_hat), format_double(be.raw_slope), format_double(be.offset),
              format_double(be.scatter_rms), std::to_string(be.steps_used)}});
  std::cout << "beta_hat = " << format_double(be.beta_hat)
            << " raw_slope=" << format_double(be.raw_slope) << " steps=" << be.steps_used << "\n";
  write_manifest(cfg, {cfg.out + ".beta.csv"}, resolved_info(rm));
  return 0;
}

void print_recurrence(const RecurrenceSum& rs) {
  std::cout << verdict_str(rs.verdict) << " S_" << rs.partials.size() - 1 << " = "
            << format_double(rs.partials.back()) << " tail_delta=" << format_double(rs.tail_delta)
            << " trend_slope=" << format_double(rs.trend_slope) << "\n";
}

int run_recurrence(const RunConfig& cfg) {
  if (cfg.depth < 1) throw invalid_parameter("--depth must be positive");
  if (!cfg.schedule.empty()) {
    // Log-space mode: rotation distances from a certified theta, no map.
    LiouvilleTheta th = liouville_theta(parse_schedule(cfg.schedule), cfg.J, cfg.precision);
    auto ld = rotation_log_dists(th, cfg.depth);
    double lambda = cfg.lambda > 0 ? cfg.lambda : 2.0;
    RecurrenceSum rs = recurrence_sum_logdist(ld, lambda, cfg.q);
    write_recurrence_csv(cfg.out + ".recurrence.csv", rs);
    print_recurrence(rs);
    write_manifest(cfg, {cfg.out + ".recurrence.csv"});
    return 0;
  }
  ResolvedMap rm = resolve_map(cfg);
  if (!rm.file.has_inverse)
    throw invalid_parameter(
        "recurrence table mode needs a map with an inverse; "
        "or give --schedule for the log-space rotation mode");
  auto I_f = indet_set(rm);
  if (I_f.empty()) throw invalid_parameter("empty indeterminacy set; no backward orbit to follow");
  OrbitTable t = backward_orbit(rm.file.finv, I_f, cfg.depth, cfg.tol);
  double lambda = cfg.lambda > 0 ? cfg.lambda : rm.lambda();
  RecurrenceSum rs = recurrence_sum(t, lambda, cfg.q);
  write_orbit_csv(cfg.out + ".orbit.csv", t);
  write_recurrence_csv(cfg.out + ".recurrence.csv", rs);
  print_recurrence(rs);
  write_manifest(cfg, {cfg.out + ".orbit.csv", cfg.out + ".recurrence.csv"}, resolved_info(rm));
  return 0;
}

double theta_approx(const LiouvilleTheta& th) {
  int sh = th.precision_bits > 512 ? th.precision_bits - 512 : 0;
  BigInt v = th.scaled_value >> sh;
  return v.convert_to<double>() / std::ldexp(1.0, th.precision_bits - sh);
}

int run_liouville(const RunConfig& cfg) {
  LiouvilleTheta th = liouville_theta(parse_schedule(cfg.schedule), cfg.J, cfg.precision);
  bool certified = true;
  std::string wlist;
  for (std::size_t j = 0; j < th.witnesses.size(); ++j) {
    certified = certified && th.log2_residue[j] < th.log2_h[j];
    wlist += (j ? "," : "") + std::to_string(th.witnesses[j]);
  }
  json out{{"E", th.E},
           {"witnesses", th.witnesses},
           {"log2_residue", th.log2_residue},
           {"log2_h", th.log2_h},
           {"precision_bits", th.precision_bits},
           {"scaled_value", th.scaled_value.str()},
           {"theta_approx", theta_approx(th)},
           {"certified", certified}};
  write_text_file(cfg.out + ".theta.json", out.dump(2) + "\n");
  std::cout << "E=" << th.E << " witnesses=[" << wlist << "]"
            << (certified ? " certified" : " NOT certified") << "\n";
  std::cout << "theta ~ " << format_double(theta_approx(th)) << "\n";
  write_manifest(cfg, {cfg.out + ".theta.json"});
  return 0;
}

int run_torus(const RunConfig& cfg) {
  if (cfg.res < 1) throw invalid_parameter("--res must be positive");
  TorusPoint a = parse_torus_point(cfg.a);
  auto pts = torus_preimages(cfg.d, cfg.zeta_order, a, cfg.depth);
  TorusFill fill = torus_grid_fill(pts, cfg.res);
  write_csv(cfg.out + ".torus.csv", "points,cells_hit,cells_total,fraction",
            {{std::to_string(fill.points), std::to_string(fill.cells_hit),
              std::to_string(fill.cells_total), format_double(fill.fraction)}});
  std::cout << "preimages depth " << cfg.depth << ": " << fill.points << " points, cells "
            << fill.cells_hit << "/" << fill.cells_total << " fraction "
            << format_double(fill.fraction) << "\n";
  write_manifest(cfg, {cfg.out + ".torus.csv"});
  return 0;
}

// ---- repro bundles ----------------------------------------------------------

struct Checks {
  std::vector<std::string> lines;
  bool ok = true;
  void check(bool good, const std::string& text) {
    lines.push_back(std::string(good ? "[ok] " : "[MISMATCH] ") + text);
    if (!good) ok = false;
  }
};

void repro_example21(Checks& c) {
  Scenario s = build_example21();
  auto degs = degree_sequence(*s.exact_map, 2);
  std::string seq;
  for (std::size_t i = 0; i < degs.size(); ++i) seq += (i ? "," : "") + std::to_string(degs[i]);
  c.check(degs == std::vector<int>{2, 3}, "d-sequence [" + seq + "] (want [2,3])");
}

void repro_green_oracle(Checks& c, double cr, double tolv) {
  double maxdev = 0;
  for (int iy = 0; iy < 41; ++iy)
    for (int ix = 0; ix < 41; ++ix) {
      Cplx z(-4.0 + 8.0 * ix / 40, -4.0 + 8.0 * iy / 40);
      maxdev = std::max(maxdev,
                        std::abs(affine_green(Cplx(cr), z, 40) - oracle_green(Cplx(cr), z)));
    }
  c.check(maxdev <= tolv, "max |affine_green(" + format_double(cr) + ") - closed form| = " +
                              format_double(maxdev) + " (tol " + format_double(tolv) + ")");
}

ChiTopResult julia_chi(double cr) {
  Scenario s = build_quadratic(Cplx(cr));
  ChiTopSampler smp;
  smp.kind = ChiTopSampler::JULIA;
  smp.samples = 2000;
  smp.c = Cplx(cr);
  smp.seed = 1;
  return chi_top(s.map, 12, smp);
}

void repro_chi_top(Checks& c) {
  for (double cr : {0.0, -2.0}) {
    double target = cr == 0.0 ? std::log(2.0) : 2.0 * std::log(2.0);
    double tolr = cr == 0.0 ? 0.02 : 0.05;
    ChiTopResult r = julia_chi(cr);
    double rel = std::abs(r.estimate - target) / target;
    c.check(rel <= tolr, "chi_top c=" + format_double(cr) + " = " + format_double(r.estimate) +
                             " rel_err=" + format_double(rel) + " (tol " + format_double(tolr) +
                             ")");
  }
}

// Pinned sampling protocol for the quadratic boundary exponents: anchors at
// the critical orbit endpoints, a box hugging the Julia set, half-decade
// scales reaching 1e-7.
ModulusFit quadratic_holder_fit(double cr) {
  Scenario s = build_quadratic(Cplx(cr));
  PairRegion region;
  region.chart = 0;
  region.x0 = -2.5;
  region.x1 = 2.5;
  region.y0 = -1;
  region.y1 = 1;
  region.anchors = cr == 0.0 ? std::vector<Cplx>{Cplx(1), Cplx(-1)}
                             : std::vector<Cplx>{Cplx(2), Cplx(-2)};
  PairSampleSet set = sample_pairs(s.map, region, 30, 80, default_scales(), 1);
  return fit_modulus(set, ModulusFamily::HOLDER);
}

void repro_holder(Checks& c) {
  ModulusFit fit = quadratic_holder_fit(-2.0);
  c.check(fit.alpha_hat >= 0.40 && fit.alpha_hat <= 0.60,
          "c=-2 envelope fit: " + fit_report_line(fit) + " (want alpha_hat in [0.40,0.60])");
  PairSampleSet planted;
  planted.n = 30;
  planted.region.x0 = -2.5;
  planted.region.x1 = 2.5;
  planted.region.y0 = -1;
  planted.region.y1 = 1;
  for (int k = 0; k < 200; ++k) {
    double d = 1e-9 * std::pow(10.0, 8.0 * k / 199);
    PairSample e;
    e.x = Cplx(0);
    e.y = Cplx(d);
    e.d = d;
    e.delta_g = 0.7 * std::sqrt(d);
    planted.entries.push_back(e);
  }
  planted.attempts = 200;
  ModulusFit pf = fit_modulus(planted, ModulusFamily::HOLDER);
  c.check(std::abs(pf.alpha_hat - 0.5) <= 1e-6,
          "planted exponent 0.5 recovered as " + format_double(pf.alpha_hat) + " (tol 1e-6)");
}

void repro_exponent_bound(Checks& c) {
  for (double cr : {0.0, -2.0}) {
    ModulusFit fit = quadratic_holder_fit(cr);
    double chi = julia_chi(cr).estimate;
    double bound = 0.9 * std::log(2.0) / chi;
    c.check(fit.alpha_hat >= bound,
            "c=" + format_double(cr) + ": alpha_hat " + format_double(fit.alpha_hat) +
                " >= 0.9 log2/chi_top = " + format_double(bound));
  }
}

void repro_fabc(Checks& c) {
  Cplx a(0, 1), b(-2, 0), cc(0, 0.5);
  Scenario s = build_fabc(a, b, cc);
  auto numeric = indeterminacy_points(s.map);
  double worst = 1;
  bool matched = numeric.size() == s.known_indet.size();
  if (matched) {
    worst = 0;
    for (const auto& k : s.known_indet) {
      double best = 1;
      for (const auto& p : numeric) best = std::min(best, chordal_dist(k, p));
      worst = std::max(worst, best);
    }
    matched = worst <= 1e-10;
  }
  c.check(matched, "numeric solver matches the closed-form base points to " +
                       format_double(worst) + " (tol 1e-10, " + std::to_string(numeric.size()) +
                       " points)");

  Scenario se = build_fabc_exact(GaussRational(Rational(0), Rational(1)),
                                 GaussRational(Rational(-2), Rational(0)),
                                 GaussRational(Rational(0), Rational(1, 2)));
  ExactMap comp = normalize(compose(*se.exact_map, *se.exact_inverse));
  bool ident = comp.degree() == 1;
  GaussRational diag[3];
  for (int i = 0; i <= 2 && ident; ++i) {
    ident = comp.comp[i].terms.size() == 1;
    if (!ident) break;
    const auto& [ex, coeff] = *comp.comp[i].terms.begin();
    ident = ex.e[i] == 1 && ex.total() == 1;
    diag[i] = coeff;
  }
  if (ident) ident = (diag[0] - diag[1]).is_zero() && (diag[1] - diag[2]).is_zero();
  c.check(ident, "exact compose(f, f_inv) normalizes to the identity");

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_line = 0;
  for (int which = 0; which < 3; ++which)
    for (int k = 0; k < 100; ++k) {
      Cplx w(u(rng), u(rng));
      Cplx w2 = fabc_line_map(which, a, b, cc, w);
      ProjectivePoint p = which == 0   ? ProjectivePoint(Cplx(0), w, Cplx(1))
                          : which == 1 ? ProjectivePoint(Cplx(1), Cplx(0), w)
                                       : ProjectivePoint(w, Cplx(1), Cplx(0));
      ProjectivePoint q = which == 0   ? ProjectivePoint(Cplx(0), w2, Cplx(1))
                          : which == 1 ? ProjectivePoint(Cplx(1), Cplx(0), w2)
                                       : ProjectivePoint(w2, Cplx(1), Cplx(0));
      worst_line = std::max(worst_line, chordal_dist(map_eval(s.map, p), q));
    }
  c.check(worst_line <= 1e-12,
          "invariant line formulas hold to " + format_double(worst_line) + " (tol 1e-12)");
}

void repro_stability_thm61(Checks& c) {
  Scenario s = build_scenario("FABC_THM61", {{"s", "2"}, {"theta", "sqrt2"}});
  StabilityReport rep = stability_check(s.map, *s.inverse, 50, kIndetTol);
  bool good = rep.verdict == StabilityVerdict::STABLE_UP_TO_N && rep.n_checked == 50 &&
              rep.min_dist > 1e-3;
  c.check(good, verdict_str(rep) + " min_dist=" + format_double(rep.min_dist) +
                    " (want STABLE-UP-TO-50 with min_dist > 1e-3)");
  double theta = std::sqrt(2.0) - 1.0;
  OrbitTable t = backward_orbit(*s.inverse, {s.known_indet[0]}, 20, kIndetTol);
  double worst = 0;
  for (std::size_t n = 0; n < t.rows[0].size() && n <= 20; ++n) {
    Cplx e = Cplx(0, 1) * std::exp(Cplx(0, -2.0 * M_PI * theta * static_cast<double>(n)));
    worst = std::max(worst, chordal_dist(t.rows[0][n].p, ProjectivePoint(e, Cplx(1), Cplx(0))));
  }
  c.check(worst <= 1e-9,
          "backward rotation row matches the closed form to " + format_double(worst) +
              " (tol 1e-9)");
}

void repro_recurrence(Checks& c) {
  Scenario s = build_scenario("FABC_THM61", {});
  OrbitTable t = backward_orbit(*s.inverse, s.known_indet, 40, kIndetTol);
  RecurrenceSum rs = recurrence_sum(t, 2.0, 2);
  c.check(rs.verdict == RecurrenceVerdict::CONVERGENT_TREND && rs.tail_delta < 1e-6,
          "golden rotation: " + verdict_str(rs.verdict) + " tail_delta=" +
              format_double(rs.tail_delta) + " (want CONVERGENT-TREND, tail < 1e-6)");
  LiouvilleTheta th = liouville_theta(schedule_doubleexp(), 4, 256);
  RecurrenceSum rl = recurrence_sum_logdist(rotation_log_dists(th, 50), 2.0, 2);
  c.check(rl.verdict == RecurrenceVerdict::DIVERGENT_TREND && rl.partials.back() < -1e3,
          "liouville rotation: " + verdict_str(rl.verdict) + " S=" +
              format_double(rl.partials.back()) + " (want DIVERGENT-TREND, S < -1e3)");
}

void repro_torus(Checks& c) {
  TorusPoint a{};
  auto d1 = torus_preimages(3, 4, a, 1);
  c.check(d1.size() == 64, "depth-1 preimages: " + std::to_string(d1.size()) + " (want 64)");
  auto d2 = torus_preimages(3, 4, a, 2);
  TorusFill f2 = torus_grid_fill(d2, 50);
  bool ok2 = d2.size() == 4096 && f2.cells_hit == 1024 && std::abs(f2.fraction - 0.4096) < 1e-12;
  c.check(ok2, "depth-2 fill: " + std::to_string(f2.cells_hit) + "/" +
                   std::to_string(f2.cells_total) + " cells (want 1024/2500)");
  auto d3 = torus_preimages(3, 4, a, 3);
  TorusFill f3 = torus_grid_fill(d3, 50);
  c.check(f3.fraction == 1.0, "depth-3 fill: " + format_double(f3.fraction) + " (want 1)");
}

void repro_properties(Checks& c, const RunConfig& cfg) {
  Scenario s2 = build_quadratic(Cplx(-2));
  Scenario sf = build_fabc(Cplx(0, 1), Cplx(-2), Cplx(0, 0.5));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    ProjectivePoint p(Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng)));
    double base = gamma_cocycle(sf.map, p);
    ProjectivePoint q = p;
    Cplx sc = std::exp(Cplx(u(rng), u(rng)));
    for (int i = 0; i <= 2; ++i) q.c[i] *= sc;
    worst = std::max(worst, std::abs(gamma_cocycle(sf.map, q) - base));
  }
  c.check(worst <= 1e-12, "cocycle lift invariance: " + format_double(worst) + " (tol 1e-12)");

  worst = 0;
  for (int k = 0; k < 30; ++k) {
    ProjectivePoint x(Cplx(1), Cplx(2 * u(rng), 2 * u(rng)));
    GreenSeries sx = green_series(s2.map, x, 30);
    GreenSeries sfx = green_series(s2.map, map_eval(s2.map, x), 29);
    double g0 = sx.orbit[0].gamma_shifted;
    for (int m = 1; m <= 30; ++m)
      worst = std::max(worst, std::abs(sx.partials[m] - (g0 + sfx.partials[m - 1] / 2.0)));
  }
  c.check(worst <= 1e-10, "functional equation: " + format_double(worst) + " (tol 1e-10)");

  double shift = sup_gamma(s2.map, 33);
  bool mono = true;
  for (int k = 0; k < 20 && mono; ++k) {
    ProjectivePoint x(Cplx(1), 0.7 * std::exp(Cplx(0, 0.3 * k)));
    GreenSeries sx = green_series(s2.map, x, 40, shift);
    for (std::size_t m = 1; m < sx.partials.size(); ++m)
      mono = mono && sx.partials[m] <= sx.partials[m - 1] + 1e-12;
  }
  c.check(mono, "shifted partial sums decrease over 40 steps");

  FloatMap f2c = normalize(compose(s2.map, s2.map));
  worst = 0;
  for (int k = 0; k < 20; ++k) {
    ProjectivePoint x(Cplx(1), Cplx(2 * u(rng), 2 * u(rng)));
    worst = std::max(worst, std::abs(green_partial(s2.map, x, {20, 0.0, kIndetTol}).value -
                                     green_partial(f2c, x, {10, 0.0, kIndetTol}).value));
  }
  c.check(worst <= 1e-9, "composition consistency: " + format_double(worst) + " (tol 1e-9)");

  Scenario e21 = build_example21();
  GridSpec spec;
  spec.x0 = spec.y0 = -1;
  spec.x1 = spec.y1 = 1;
  spec.nx = spec.ny = 33;
  spec.chart = 2;
  GreenOptions opt;
  opt.n = 10;
  auto v1 = green_grid(e21.map, spec, opt, 1);
  auto v4 = green_grid(e21.map, spec, opt, 4);
  write_heatmap_csv(cfg.out + ".threads1.csv", spec, v1);
  write_heatmap_csv(cfg.out + ".threads4.csv", spec, v4);
  c.check(read_text_file(cfg.out + ".threads1.csv") == read_text_file(cfg.out + ".threads4.csv"),
          "heatmap CSV is byte-identical for --threads 1 and 4");
  c.check(std::isnan(v1[16 * 33 + 16]), "pole pixel at the chart center renders as nan");
}

int run_repro(const RunConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.repro_name == "all")
    names = {"example21",       "green-c0",   "green-cminus2", "chi-top",
             "holder",          "exponent-bound", "fabc",      "stability-thm61",
             "recurrence",      "torus",      "properties"};
  else
    names = {cfg.repro_name};
  Checks c;
  std::vector<std::string> outputs{cfg.out + ".repro.txt"};
  for (const auto& name : names) {
    if (name == "example21") {
      repro_example21(c);
    } else if (name == "green-c0") {
      repro_green_oracle(c, 0.0, 1e-8);
    } else if (name == "green-cminus2") {
      repro_green_oracle(c, -2.0, 1e-6);
    } else if (name == "chi-top") {
      repro_chi_top(c);
    } else if (name == "holder") {
      repro_holder(c);
    } else if (name == "exponent-bound") {
      repro_exponent_bound(c);
    } else if (name == "fabc") {
      repro_fabc(c);
    } else if (name == "stability-thm61") {
      repro_stability_thm61(c);
    } else if (name == "recurrence") {
      repro_recurrence(c);
    } else if (name == "torus") {
      repro_torus(c);
    } else if (name == "properties") {
      repro_properties(c, cfg);
      outputs.push_back(cfg.out + ".threads1.csv");
      outputs.push_back(cfg.out + ".threads4.csv");
    } else {
      throw invalid_parameter("unknown repro target '" + name + "'");
    }
  }
  std::string text;
  for (const auto& line : c.lines) {
    std::cout << line << "\n";
    text += line + "\n";
  }
  std::string status = "repro " + cfg.repro_name + ": " + (c.ok ? "OK" : "MISMATCH");
  std::cout << status << "\n";
  text += status + "\n";
  write_text_file(cfg.out + ".repro.txt", text);
  write_manifest(cfg, outputs);
  return c.ok ? 0 : 2;
}

// ---- dispatch ---------------------------------------------------------------

int dispatch(const RunConfig& cfg) {
  if (cfg.subcommand == "degree-seq") return run_degree_seq(cfg);
  if (cfg.subcommand == "indet") return run_indet(cfg);
  if (cfg.subcommand == "stability") return run_stability(cfg);
  if (cfg.subcommand == "green-eval") return run_green_eval(cfg);
  if (cfg.subcommand == "green-heatmap") return run_green_heatmap(cfg);
  if (cfg.subcommand == "affine-green") return run_affine_green(cfg);
  if (cfg.subcommand == "chi-top") return run_chi_top(cfg);
  if (cfg.subcommand == "modulus-fit") return run_modulus_fit(cfg);
  if (cfg.subcommand == "beta-est") return run_beta_est(cfg);
  if (cfg.subcommand == "recurrence") return run_recurrence(cfg);
  if (cfg.subcommand == "liouville-theta") return run_liouville(cfg);
  if (cfg.subcommand == "torus-density") return run_torus(cfg);
  if (cfg.subcommand == "repro") return run_repro(cfg);
  throw invalid_parameter("unknown subcommand '" + cfg.subcommand + "'");
}

void apply_defaults(RunConfig& cfg) {
  auto fill = [](int& v, int d) {
    if (v < 0) v = d;
  };
  auto fills = [](std::string& v, const std::string& d) {
    if (v.empty()) v = d;
  };
  const std::string& s = cfg.subcommand;
  if (s == "degree-seq") fill(cfg.n, 4);
  if (s == "stability") fill(cfg.n, 50);
  if (s == "green-eval") fill(cfg.n, 30);
  if (s == "green-heatmap") {
    fill(cfg.n, 20);
    fill(cfg.res, 64);
    fills(cfg.window, "-2,2,-2,2");
  }
  if (s == "affine-green") {
    fill(cfg.n, 40);
    fill(cfg.res, 41);
    fills(cfg.window, "-4,4,-4,4");
  }
  if (s == "chi-top") {
    fill(cfg.n, 12);
    fill(cfg.res, 17);
    fill(cfg.samples, 2000);
  }
  if (s == "modulus-fit") {
    fill(cfg.n, 30);
    fills(cfg.window, "-2,2,-2,2");
  }
  if (s == "beta-est") {
    fill(cfg.n, 12);
    fill(cfg.samples, 20);
  }
  if (s == "recurrence") fill(cfg.depth, 40);
  if (s == "liouville-theta") fills(cfg.schedule, "doubleexp");
  if (s == "torus-density") {
    fill(cfg.depth, 1);
    fill(cfg.res, 50);
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string from_manifest, out_override;
  CLI::App app{std::string("greendyn ") + kVersion +
               ": rational-map dynamics on P^1 and P^2 with file-based artifacts"};
  app.require_subcommand(0, 1);
  app.add_option("--from-manifest", from_manifest,
                 "replay a recorded run from its manifest (replaces the subcommand)");
  app.add_option("--out", out_override, "output prefix override when replaying");

  auto add_map_source = [&cfg](CLI::App* sc) {
    sc->add_option("--map", cfg.map_file, "map definition JSON file");
    sc->add_option("--scenario", cfg.scenario, "built-in scenario name");
    sc->add_option("--params", cfg.params, "scenario parameters k=v,...");
  };
  auto add_common = [&cfg](CLI::App* sc) {
    sc->add_option("--tol", cfg.tol, "indeterminacy tolerance");
    sc->add_option("--seed", cfg.seed, "RNG seed");
    sc->add_option("--threads", cfg.threads, "worker count (results never depend on it)");
    sc->add_option("--out", cfg.out, "output path prefix");
    sc->add_flag("--assume-stable", cfg.assume_stable,
                 "skip the 1-stability gate before Green computations");
  };

  CLI::App* sc = app.add_subcommand("degree-seq", "degrees of the normalized iterates");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--n", cfg.n, "number of iterates (default 4)");

  sc = app.add_subcommand("indet", "indeterminacy points of the map");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--dump-map", cfg.dump_map, "also write the resolved map as JSON");

  sc = app.add_subcommand("stability", "1-stability check, backward-orbit or degree route");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--n", cfg.n, "orbit depth / iterate count (default 50)");

  sc = app.add_subcommand("green-eval", "Green series at one point");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--n", cfg.n, "series depth (default 30)");
  sc->add_option("--z", cfg.z, "chart coordinate of the point");
  sc->add_option("--chart", cfg.chart, "affine chart index");
  sc->add_option("--slice", cfg.slice, "second chart coordinate on P^2");
  sc->add_option("--shift", cfg.shift, "cocycle shift");

  sc = app.add_subcommand("green-heatmap", "Green partial sums over a window");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--n", cfg.n, "series depth (default 20)");
  sc->add_option("--res", cfg.res, "grid resolution per axis (default 64)");
  sc->add_option("--window", cfg.window, "x0,x1,y0,y1 (default -2,2,-2,2)");
  sc->add_option("--chart", cfg.chart, "affine chart index");
  sc->add_option("--slice", cfg.slice, "second chart coordinate on P^2");
  sc->add_option("--shift", cfg.shift, "cocycle shift");

  sc = app.add_subcommand("affine-green", "escape-time reference potential for w^2 + c");
  add_common(sc);
  sc->add_option("--c", cfg.c, "family parameter");
  sc->add_option("--n", cfg.n, "iteration cap (default 40)");
  sc->add_option("--res", cfg.res, "grid resolution per axis (default 41)");
  sc->add_option("--window", cfg.window, "x0,x1,y0,y1 (default -4,4,-4,4)");

  sc = app.add_subcommand("chi-top", "derivative growth rate over a sample family");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--n", cfg.n, "chain length (default 12)");
  sc->add_option("--sampler", cfg.sampler, "grid | julia");
  sc->add_option("--res", cfg.res, "grid sampler resolution (default 17)");
  sc->add_option("--samples", cfg.samples, "julia sampler branch count (default 2000)");
  sc->add_option("--c", cfg.c, "julia sampler parameter (a QUADRATIC scenario overrides it)");

  sc = app.add_subcommand("modulus-fit", "pair sampling and modulus-of-continuity fit");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--n", cfg.n, "series depth (default 30)");
  sc->add_option("--family", cfg.family, "holder | h_alpha | phi_alpha");
  sc->add_option("--count", cfg.count, "pairs per scale (default 80)");
  sc->add_option("--scales", cfg.scales, "comma list (default half-decades 1e-7..1e-1)");
  sc->add_option("--anchors", cfg.anchors, "semicolon list of complex anchors");
  sc->add_option("--window", cfg.window, "sampling box x0,x1,y0,y1 (default -2,2,-2,2)");
  sc->add_option("--chart", cfg.chart, "affine chart index");
  sc->add_option("--slice", cfg.slice, "second chart coordinate on P^2");

  sc = app.add_subcommand("beta-est", "orbit separation exponent near the indeterminacy set");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--n", cfg.n, "orbit length (default 12)");
  sc->add_option("--samples", cfg.samples, "seeds per indeterminacy point (default 20)");

  sc = app.add_subcommand("recurrence", "weighted recurrence sums along backward orbits");
  add_map_source(sc);
  add_common(sc);
  sc->add_option("--depth", cfg.depth, "orbit depth (default 40)");
  sc->add_option("--lambda", cfg.lambda, "weight base (default: map degree, 2 in log mode)");
  sc->add_option("--q", cfg.q, "weight exponent, 1 or 2");
  sc->add_option("--schedule", cfg.schedule, "log-space rotation mode: const:H | doubleexp");
  sc->add_option("--J", cfg.J, "witness count in log mode (default 4)");
  sc->add_option("--precision", cfg.precision, "theta precision bits in log mode (default 256)");

  sc = app.add_subcommand("liouville-theta", "rotation number with certified admission witnesses");
  add_common(sc);
  sc->add_option("--schedule", cfg.schedule, "const:H | doubleexp (default doubleexp)");
  sc->add_option("--J", cfg.J, "witness count (default 4)");
  sc->add_option("--precision", cfg.precision, "precision bits (default 256)");

  sc = app.add_subcommand("torus-density", "preimage counts and grid fill on the lattice torus");
  add_common(sc);
  sc->add_option("--d", cfg.d, "multiplier (default 3)");
  sc->add_option("--zeta-order", cfg.zeta_order, "lattice root of unity order: 3, 4 or 6");
  sc->add_option("--depth", cfg.depth, "preimage depth (default 1)");
  sc->add_option("--res", cfg.res, "fill grid resolution (default 50)");
  sc->add_option("--a", cfg.a, "base point a1,b1,a2,b2 (rationals p/q)");

  sc = app.add_subcommand("repro", "named reproduction runs against stored expectations");
  add_common(sc);
  sc->add_option("name", cfg.repro_name,
                 "example21 | green-c0 | green-cminus2 | chi-top | holder | exponent-bound | "
                 "fabc | stability-thm61 | recurrence | torus | properties | all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!from_manifest.empty()) {
      if (!app.get_subcommands().empty())
        throw invalid_parameter("--from-manifest replaces the subcommand");
      json m = json::parse(read_text_file(from_manifest));
      RunConfig replay = config_from_json(m.at("config"));
      if (replay.subcommand.empty()) throw invalid_parameter("manifest carries no subcommand");
      if (!out_override.empty()) replay.out = out_override;
      return dispatch(replay);
    }
    auto subs = app.get_subcommands();
    if (subs.empty()) {
      std::cerr << app.help();
      return 1;
    }
    cfg.subcommand = subs[0]->get_name();
    apply_defaults(cfg);
    return dispatch(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
