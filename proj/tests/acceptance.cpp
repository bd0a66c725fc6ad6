// Acceptance gate: ten numbered checks with pinned tolerances and runtime
// budgets, one PASS/FAIL line each.  Exit code is the number of failed
// criteria.  Check 10 shells out to the CLI binary (GREENDYN_CLI_PATH) for
// the thread-determinism comparison.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "greendyn/greens.hpp"
#include "greendyn/indeterminacy.hpp"
#include "greendyn/io.hpp"
#include "greendyn/liouville.hpp"
#include "greendyn/map.hpp"
#include "greendyn/regularity.hpp"
#include "greendyn/scenarios.hpp"
#include "greendyn/torus.hpp"
#include "greendyn/version.hpp"

namespace {

using namespace greendyn;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void report(int idx, bool ok, const std::string& text, double secs, double budget) {
  bool in_budget = budget <= 0 || secs < budget;
  bool pass = ok && in_budget;
  if (!pass) ++g_failures;
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << idx << ": " << text;
  if (budget > 0)
    std::cout << " [" << fmt(secs) << "s" << (in_budget ? "" : " OVER BUDGET") << " / "
              << fmt(budget) << "s]";
  std::cout << "\n";
}

// 1. Degree drop under composition: normalized iterate degrees are [2,3].
void criterion_1() {
  auto t0 = Clock::now();
  Scenario s = build_example21();
  auto degs = degree_sequence(*s.exact_map, 2);
  std::string seq;
  for (std::size_t i = 0; i < degs.size(); ++i) seq += (i ? "," : "") + std::to_string(degs[i]);
  report(1, degs == std::vector<int>{2, 3},
         "iterate degrees [" + seq + "] == [2,3] exactly", seconds_since(t0), 1.0);
}

// 2. Escape-time potential against the two closed forms on a 41x41 grid.
void criterion_2() {
  auto t0 = Clock::now();
  double dev0 = 0, dev2 = 0;
  for (int iy = 0; iy < 41; ++iy)
    for (int ix = 0; ix < 41; ++ix) {
      Cplx z(-4.0 + 8.0 * ix / 40, -4.0 + 8.0 * iy / 40);
      double logplus = std::log(std::max(1.0, std::abs(z)));
      dev0 = std::max(dev0, std::abs(affine_green(Cplx(0), z, 40) - logplus));
      dev2 = std::max(dev2, std::abs(affine_green(Cplx(-2), z, 40) - oracle_green(Cplx(-2), z)));
    }
  report(2, dev0 <= 1e-8 && dev2 <= 1e-6,
         "max dev c=0: " + fmt(dev0) + " (tol 1e-8), c=-2: " + fmt(dev2) + " (tol 1e-6)",
         seconds_since(t0), 5.0);
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

// 3. Derivative growth rates hit log 2 and 2 log 2 on boundary samples.
void criterion_3() {
  auto t0 = Clock::now();
  double e0 = julia_chi(0.0).estimate;
  double e2 = julia_chi(-2.0).estimate;
  double r0 = std::abs(e0 - std::log(2.0)) / std::log(2.0);
  double r2 = std::abs(e2 - 2.0 * std::log(2.0)) / (2.0 * std::log(2.0));
  report(3, r0 <= 0.02 && r2 <= 0.05,
         "chi_top c=0: " + fmt(e0) + " rel " + fmt(r0) + " (tol 2%), c=-2: " + fmt(e2) + " rel " +
             fmt(r2) + " (tol 5%), n=12, 2000 samples",
         seconds_since(t0), 30.0);
}

// Pinned pair-sampling protocol for the quadratic boundary exponent.
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
  std::vector<double> scales;
  for (int k = 0; k <= 12; ++k) scales.push_back(1e-7 * std::pow(10.0, 0.5 * k));
  PairSampleSet set = sample_pairs(s.map, region, 30, 80, scales, 1);
  return fit_modulus(set, ModulusFamily::HOLDER);
}

// 4. Boundary exponent fit lands near 1/2, and a planted exponent comes back.
void criterion_4() {
  auto t0 = Clock::now();
  ModulusFit fit = quadratic_holder_fit(-2.0);
  PairSampleSet planted;
  planted.n = 30;
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
  report(4,
         fit.alpha_hat >= 0.40 && fit.alpha_hat <= 0.60 && std::abs(pf.alpha_hat - 0.5) <= 1e-6,
         "alpha_hat " + fmt(fit.alpha_hat) + " in [0.40,0.60], residual_rms " +
             fmt(fit.residual_rms) + "; planted 0.5 -> " + fmt(pf.alpha_hat) + " (tol 1e-6)",
         seconds_since(t0), 0);
}

// 5. Fitted exponents respect the growth-rate bound log 2 / chi_top.
void criterion_5() {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (double cr : {0.0, -2.0}) {
    double alpha = quadratic_holder_fit(cr).alpha_hat;
    double bound = 0.9 * std::log(2.0) / julia_chi(cr).estimate;
    ok = ok && alpha >= bound;
    if (!detail.empty()) detail += ", ";
    detail += "c=" + fmt(cr) + ": " + fmt(alpha) + " >= " + fmt(bound);
  }
  report(5, ok, detail, seconds_since(t0), 0);
}

// 6. Three-line involution family: base points, inverse, line dynamics.
void criterion_6() {
  auto t0 = Clock::now();
  Cplx a(0, 1), b(-2, 0), cc(0, 0.5);
  Scenario s = build_fabc(a, b, cc);
  auto numeric = indeterminacy_points(s.map);
  double worst_pt = 1;
  if (numeric.size() == s.known_indet.size()) {
    worst_pt = 0;
    for (const auto& k : s.known_indet) {
      double best = 1;
      for (const auto& p : numeric) best = std::min(best, chordal_dist(k, p));
      worst_pt = std::max(worst_pt, best);
    }
  }

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
  report(6, worst_pt <= 1e-10 && ident && worst_line <= 1e-12,
         "base points to " + fmt(worst_pt) + " (tol 1e-10); inverse composes to identity: " +
             (ident ? "yes" : "no") + "; line formulas to " + fmt(worst_line) + " (tol 1e-12)",
         seconds_since(t0), 5.0);
}

// 7. Rotation-parameter family stays 1-stable and the backward row rotates.
void criterion_7() {
  auto t0 = Clock::now();
  Scenario s = build_scenario("FABC_THM61", {{"s", "2"}, {"theta", "sqrt2"}});
  StabilityReport rep = stability_check(s.map, *s.inverse, 50, kIndetTol);
  bool stable = rep.verdict == StabilityVerdict::STABLE_UP_TO_N && rep.n_checked == 50 &&
                rep.min_dist > 1e-3;
  double theta = std::sqrt(2.0) - 1.0;
  OrbitTable t = backward_orbit(*s.inverse, {s.known_indet[0]}, 20, kIndetTol);
  double worst = 0;
  for (std::size_t n = 0; n < t.rows[0].size() && n <= 20; ++n) {
    Cplx e = Cplx(0, 1) * std::exp(Cplx(0, -2.0 * M_PI * theta * static_cast<double>(n)));
    worst = std::max(worst, chordal_dist(t.rows[0][n].p, ProjectivePoint(e, Cplx(1), Cplx(0))));
  }
  report(7, stable && worst <= 1e-9,
         "s=2 theta=sqrt2-1: min_dist " + fmt(rep.min_dist) + " > 1e-3 over 50 steps; backward "
         "row matches rotation to " + fmt(worst) + " (tol 1e-9)",
         seconds_since(t0), 0);
}

// 8. Recurrence-sum dichotomy: golden rotation converges, the fast-approach
// rotation number diverges past -1e3.
void criterion_8() {
  auto t0 = Clock::now();
  Scenario s = build_scenario("FABC_THM61", {});
  OrbitTable t = backward_orbit(*s.inverse, s.known_indet, 40, kIndetTol);
  RecurrenceSum rg = recurrence_sum(t, 2.0, 2);
  bool golden = rg.verdict == RecurrenceVerdict::CONVERGENT_TREND && rg.tail_delta < 1e-6;
  LiouvilleTheta th = liouville_theta(schedule_doubleexp(), 4, 256);
  RecurrenceSum rl = recurrence_sum_logdist(rotation_log_dists(th, 50), 2.0, 2);
  bool liou = rl.verdict == RecurrenceVerdict::DIVERGENT_TREND && rl.partials.back() < -1e3;
  report(8, golden && liou,
         "golden: CONVERGENT-TREND tail " + fmt(rg.tail_delta) + " (< 1e-6); liouville: S = " +
             fmt(rl.partials.back()) + " (< -1e3) DIVERGENT-TREND",
         seconds_since(t0), 10.0);
}

// 9. Torus preimage counts and grid fill.  Direct enumeration puts the
// depth-2 fill at 1024/2500 = 0.4096, well under the required 0.95; full
// coverage arrives one level later (depth-3 fill = 1.0, also reported).
// The check is recorded as stated and fails on the measured value.
void criterion_9() {
  auto t0 = Clock::now();
  TorusPoint a{};
  auto d1 = torus_preimages(3, 4, a, 1);
  auto d2 = torus_preimages(3, 4, a, 2);
  TorusFill f2 = torus_grid_fill(d2, 50);
  auto d3 = torus_preimages(3, 4, a, 3);
  TorusFill f3 = torus_grid_fill(d3, 50);
  report(9, d1.size() == 64 && f2.fraction >= 0.95,
         "depth-1 points " + std::to_string(d1.size()) + " == 64; depth-2 fill " +
             fmt(f2.fraction) + " (need >= 0.95; depth-3 fill " + fmt(f3.fraction) + ")",
         seconds_since(t0), 30.0);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Cocycle and series identities, plus byte-identical CLI output across
// thread counts.
void criterion_10() {
  auto t0 = Clock::now();
  Scenario s2 = build_quadratic(Cplx(-2));
  Scenario sf = build_fabc(Cplx(0, 1), Cplx(-2), Cplx(0, 0.5));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double lift = 0;
  for (int k = 0; k < 100; ++k) {
    ProjectivePoint p(Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng)), Cplx(u(rng), u(rng)));
    double base = gamma_cocycle(sf.map, p);
    ProjectivePoint q = p;
    Cplx sc = std::exp(Cplx(u(rng), u(rng)));
    for (int i = 0; i <= 2; ++i) q.c[i] *= sc;
    lift = std::max(lift, std::abs(gamma_cocycle(sf.map, q) - base));
  }

  double feq = 0;
  for (int k = 0; k < 30; ++k) {
    ProjectivePoint x(Cplx(1), Cplx(2 * u(rng), 2 * u(rng)));
    GreenSeries sx = green_series(s2.map, x, 30);
    GreenSeries sfx = green_series(s2.map, map_eval(s2.map, x), 29);
    double g0 = sx.orbit[0].gamma_shifted;
    for (int m = 1; m <= 30; ++m)
      feq = std::max(feq, std::abs(sx.partials[m] - (g0 + sfx.partials[m - 1] / 2.0)));
  }

  double shift = sup_gamma(s2.map, 33);
  bool mono = true;
  for (int k = 0; k < 20 && mono; ++k) {
    ProjectivePoint x(Cplx(1), 0.7 * std::exp(Cplx(0, 0.3 * k)));
    GreenSeries sx = green_series(s2.map, x, 40, shift);
    for (std::size_t m = 1; m < sx.partials.size(); ++m)
      mono = mono && sx.partials[m] <= sx.partials[m - 1] + 1e-12;
  }

  FloatMap f2c = normalize(compose(s2.map, s2.map));
  double compc = 0;
  for (int k = 0; k < 20; ++k) {
    ProjectivePoint x(Cplx(1), Cplx(2 * u(rng), 2 * u(rng)));
    compc = std::max(compc, std::abs(green_partial(s2.map, x, {20, 0.0, kIndetTol}).value -
                                     green_partial(f2c, x, {10, 0.0, kIndetTol}).value));
  }

  fs::path dir = fs::temp_directory_path() / "greendyn-acceptance";
  fs::create_directories(dir);
  bool threads_ok = true;
  for (int th : {1, 4}) {
    std::string cmd = std::string(GREENDYN_CLI_PATH) +
                      " green-heatmap --scenario EXAMPLE21 --assume-stable --chart 2"
                      " --window -1,1,-1,1 --res 33 --n 10 --threads " + std::to_string(th) +
                      " --out " + (dir / ("th" + std::to_string(th))).string() + " > /dev/null 2>&1";
    threads_ok = threads_ok && std::system(cmd.c_str()) == 0;
  }
  threads_ok = threads_ok &&
               slurp(dir / "th1.heatmap.csv") == slurp(dir / "th4.heatmap.csv") &&
               !slurp(dir / "th1.heatmap.csv").empty();

  report(10,
         lift <= 1e-12 && feq <= 1e-10 && mono && compc <= 1e-9 && threads_ok,
         "lift " + fmt(lift) + " (1e-12); functional eq " + fmt(feq) + " (1e-10); monotone " +
             (mono ? "yes" : "no") + "; composition " + fmt(compc) + " (1e-9); threads CSV " +
             (threads_ok ? "identical" : "DIFFER"),
         seconds_since(t0), 0);
}

}  // namespace

int main() {
  std::cout << "acceptance gate, library " << kVersion << "\n";
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) + " criterion(s) failed")
            << "\n";
  return g_failures;
}
