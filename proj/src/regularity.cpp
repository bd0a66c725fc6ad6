#include "greendyn/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "greendyn/errors.hpp"
#include "greendyn/io.hpp"

namespace greendyn {

namespace {

constexpr double kLogFloor = 1e-300;  // keeps critical points from poisoning sums with -inf

double safe_log(double v) { return std::log(std::max(v, kLogFloor)); }

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(seed) ^ mix64((a << 32) ^ b));
}

struct LineFit {
  double slope = 0, intercept = 0, rms = 0;
  bool degenerate = false;  // abscissae carried no spread
};

LineFit fit_line(const std::vector<std::pair<double, double>>& pts) {
  LineFit out;
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
  double den = n * sxx - sx * sx;
  if (den <= 1e-18 * std::max(1.0, n * sxx)) {
    out.degenerate = true;
    return out;
  }
  out.slope = (n * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / n;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    double r = y - (out.slope * x + out.intercept);
    ss += r * r;
  }
  out.rms = std::sqrt(ss / n);
  return out;
}

}  // namespace

ChiTopResult chi_top(const FloatMap& f, int n, const ChiTopSampler& sampler) {
  if (n < 1) throw invalid_parameter("chi_top: n must be positive");
  ChiTopResult out;
  out.n = n;
  double best = -1e300;
  if (sampler.kind == ChiTopSampler::GRID) {
    if (sampler.resolution < 2) throw invalid_parameter("chi_top: resolution must be >= 2");
    for (const auto& start : chart_samples(f.dim, sampler.resolution)) {
      double acc = 0;
      bool ok = true;
      ProjectivePoint cur = start;
      for (int k = 0; k < n; k++) {
        try {
          acc += safe_log(jacobian_norm(f, cur, kIndetTol));
          cur = map_eval(f, cur, kIndetTol);
        } catch (const std::runtime_error&) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        out.orbits_skipped++;
        continue;
      }
      out.orbits_used++;
      best = std::max(best, acc / n);
    }
  } else {
    if (f.dim != 1) throw invalid_parameter("chi_top: JULIA sampler needs a dimension-1 map");
    if (sampler.samples < 1) throw invalid_parameter("chi_top: samples must be positive");
    // Inverse iteration for w -> w^2 + c: predecessors are +-sqrt(w - c), and
    // the recorded sequence read backwards is a forward orbit, so an n-window
    // prefix-sum difference is an n-step chain-rule log product.
    Cplx c = sampler.c;
    Cplx beta = (1.0 + std::sqrt(Cplx(1.0) - 4.0 * c)) / 2.0;  // repelling fixed point
    auto run_walk = [&](int warmup, int windows, auto branch) {
      Cplx w = beta;
      int total = warmup + n + windows;
      std::vector<double> prefix(1, 0.0);
      prefix.reserve(total + 1);
      for (int k = 0; k < total; k++) {
        double jn;
        try {
          jn = jacobian_norm(f, ProjectivePoint(Cplx(1), w), kIndetTol);
        } catch (const std::runtime_error&) {
          jn = kLogFloor;
        }
        prefix.push_back(prefix.back() + safe_log(jn));
        Cplx r = std::sqrt(w - c);
        w = branch() ? r : -r;
      }
      for (int e = warmup + n; e < total; e++) {
        best = std::max(best, (prefix[e + 1] - prefix[e + 1 - n]) / n);
        out.orbits_used++;
      }
    };
    std::mt19937_64 rng(sampler.seed);
    run_walk(sampler.warmup, sampler.samples, [&] { return (rng() & 1ull) != 0; });
    // Constant-branch probes keep period-one extremes represented whatever the
    // random branches do.
    int probe = std::max(1, sampler.samples / 10);
    run_walk(sampler.warmup / 2, probe, [] { return true; });
    run_walk(sampler.warmup / 2, probe, [] { return false; });
  }
  if (out.orbits_used == 0) throw insufficient_spread("chi_top: no evaluable orbit");
  out.estimate = best;
  return out;
}

PairSampleSet sample_pairs(const FloatMap& f, const PairRegion& region, int n, int count,
                           const std::vector<double>& scales, std::uint64_t seed) {
  if (n < 1) throw invalid_parameter("sample_pairs: n must be positive");
  if (count < 1) throw invalid_parameter("sample_pairs: count must be positive");
  if (scales.empty()) throw invalid_parameter("sample_pairs: need at least one scale");
  for (double s : scales)
    if (!(s > 0)) throw invalid_parameter("sample_pairs: scales must be positive");
  double wx = region.x1 - region.x0, wy = region.y1 - region.y0;
  if (!(wx > 0) || !(wy > 0)) throw invalid_parameter("sample_pairs: empty region");
  PairSampleSet out;
  out.n = n;
  out.region = region;
  GreenOptions opt;
  opt.n = n;
  double diag = std::hypot(wx, wy);
  double smin = *std::min_element(scales.begin(), scales.end());
  for (std::size_t si = 0; si < scales.size(); ++si) {
    for (int k = 0; k < count; ++k) {
      out.attempts++;
      std::mt19937_64 rng(substream(seed, si, static_cast<std::uint64_t>(k)));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      Cplx x;
      if (!region.anchors.empty() && k % 2 == 0) {
        // Log-radial cloud around the anchors: resolves the modulus down to
        // the smallest requested scale where the extremes are suspected.
        const Cplx& a = region.anchors[(k / 2) % region.anchors.size()];
        double lo = std::log(0.5 * smin), hi = std::log(0.25 * diag);
        if (hi <= lo) hi = lo + 1.0;
        double r = std::exp(lo + (hi - lo) * unit(rng));
        x = a + std::polar(r, 2 * M_PI * unit(rng));
      } else {
        x = Cplx(region.x0 + wx * unit(rng), region.y0 + wy * unit(rng));
      }
      Cplx y = x + std::polar(scales[si], 2 * M_PI * unit(rng));
      // The moduli hold locally uniformly on compacta; pairs must stay inside
      // the stated region or the prefactor is not comparable across samples.
      auto inside = [&](Cplx p) {
        return p.real() >= region.x0 && p.real() <= region.x1 && p.imag() >= region.y0 &&
               p.imag() <= region.y1;
      };
      if (!inside(x) || !inside(y)) continue;
      ProjectivePoint X = chart_point(f.dim, region.chart, x, region.slice);
      ProjectivePoint Y = chart_point(f.dim, region.chart, y, region.slice);
      double d = chordal_dist(X, Y);
      if (!(d > 0)) continue;
      try {
        double gx = green_partial(f, X, opt).value;
        double gy = green_partial(f, Y, opt).value;
        if (!std::isfinite(gx) || !std::isfinite(gy)) continue;
        out.entries.push_back({x, y, d, std::abs(gx - gy)});
      } catch (const std::runtime_error&) {
        // orbit fell into indeterminacy: drop the pair
      }
    }
  }
  if (out.entries.size() * 10 < static_cast<std::size_t>(out.attempts))
    throw insufficient_spread("sample_pairs: fewer than 10% of pairs evaluable");
  return out;
}

ModulusFit fit_modulus(const PairSampleSet& samples, ModulusFamily family) {
  std::vector<const PairSample*> pos;
  for (const auto& e : samples.entries) {
    if (!(e.d > 0) || !(e.delta_g > 0)) continue;
    if (!std::isfinite(e.d) || !std::isfinite(e.delta_g)) continue;
    // |ln d| appears in a denominator role for the slow families
    if (family != ModulusFamily::HOLDER && e.d > 0.999999) continue;
    pos.push_back(&e);
  }
  if (pos.size() < 30) throw insufficient_spread("fit_modulus: need at least 30 usable pairs");
  double dmin = 1e300, dmax = 0;
  for (const auto* e : pos) {
    dmin = std::min(dmin, e->d);
    dmax = std::max(dmax, e->d);
  }
  if (!(dmax >= 1e3 * dmin))
    throw insufficient_spread("fit_modulus: separations span fewer than 3 decades");
  // Upper envelope: the moduli bound max delta_g at a given separation, so fit
  // the per-bucket maxima, not the cloud.
  const int kBuckets = 24;
  double l0 = std::log(dmin), l1 = std::log(dmax);
  std::vector<const PairSample*> pick(kBuckets, nullptr);
  for (const auto* e : pos) {
    int b = std::min(kBuckets - 1,
                     static_cast<int>(std::floor(kBuckets * (std::log(e->d) - l0) / (l1 - l0))));
    if (!pick[b] || e->delta_g > pick[b]->delta_g) pick[b] = e;
  }
  // A modulus is monotone (sup over separations <= d), so buckets whose max
  // is dominated from the left carry no envelope information; keep records.
  std::vector<const PairSample*> records;
  double run = 0;
  for (const auto* e : pick) {
    if (!e || !(e->delta_g > run)) continue;
    run = e->delta_g;
    records.push_back(e);
  }
  std::vector<std::pair<double, double>> pts;
  ModulusFit fit;
  fit.family = family;
  fit.d_min = 1e300;
  fit.d_max = 0;
  for (const auto* e : records) {
    double X, Y;
    switch (family) {
      case ModulusFamily::HOLDER:
        X = std::log(e->d);
        Y = std::log(e->delta_g);
        break;
      case ModulusFamily::H_ALPHA:
        X = -std::sqrt(std::abs(std::log(e->d)));
        Y = std::log(e->delta_g);
        break;
      default:  // PHI_ALPHA
        X = std::log(std::abs(std::log(e->d)));
        Y = -std::log(e->delta_g);
        break;
    }
    pts.emplace_back(X, Y);
    fit.d_min = std::min(fit.d_min, e->d);
    fit.d_max = std::max(fit.d_max, e->d);
  }
  if (pts.size() < 5) throw insufficient_spread("fit_modulus: envelope has fewer than 5 buckets");
  LineFit lf = fit_line(pts);
  if (lf.degenerate) throw insufficient_spread("fit_modulus: degenerate abscissa spread");
  fit.alpha_hat = lf.slope;
  fit.intercept = lf.intercept;
  fit.residual_rms = lf.rms;
  fit.sample_count = static_cast<int>(pts.size());
  return fit;
}

std::string family_name(ModulusFamily f) {
  switch (f) {
    case ModulusFamily::HOLDER:
      return "HOLDER";
    case ModulusFamily::H_ALPHA:
      return "H_ALPHA";
    default:
      return "PHI_ALPHA";
  }
}

std::string fit_report_line(const ModulusFit& fit) {
  return family_name(fit.family) + "," + format_double(fit.alpha_hat) + "," +
         format_double(fit.intercept) + "," + format_double(fit.residual_rms) + "," +
         std::to_string(fit.sample_count) + "," + format_double(fit.d_min) + "," +
         format_double(fit.d_max);
}

BetaEstimate beta_estimate(const FloatMap& f, const std::vector<ProjectivePoint>& indet_approx,
                           const std::vector<ProjectivePoint>& orbit_seeds, int n) {
  if (orbit_seeds.empty()) throw invalid_parameter("beta_estimate: need at least one orbit seed");
  if (indet_approx.empty())
    throw invalid_parameter("beta_estimate: need an indeterminacy approximation");
  if (n < 1) throw invalid_parameter("beta_estimate: n must be positive");
  auto dist = [&](const ProjectivePoint& p) {
    double best = 2;
    for (const auto& q : indet_approx) best = std::min(best, chordal_dist(p, q));
    return best;
  };
  std::vector<std::pair<double, double>> pts;  // (log d(x, I), log d(fx, I))
  for (const auto& seed : orbit_seeds) {
    ProjectivePoint cur = seed;
    for (int k = 0; k < n; k++) {
      double dx = dist(cur);
      ProjectivePoint nxt;
      try {
        nxt = map_eval(f, cur, kIndetTol);
      } catch (const std::runtime_error&) {
        break;
      }
      if (dx < 0.1 && dx > 0) pts.emplace_back(std::log(dx), safe_log(dist(nxt)));
      cur = nxt;
    }
  }
  if (pts.empty()) throw insufficient_spread("beta_estimate: no orbit step entered the near region");
  BetaEstimate est;
  est.steps_used = static_cast<int>(pts.size());
  LineFit lf = pts.size() >= 2 ? fit_line(pts) : LineFit{0, 0, 0, true};
  if (lf.degenerate) {
    // No abscissa spread: fall back to the power-law ratio through the origin.
    double acc = 0;
    for (const auto& [x, y] : pts) acc += y / x;
    est.raw_slope = acc / pts.size();
    est.offset = 0;
    double ss = 0;
    for (const auto& [x, y] : pts) {
      double r = y - est.raw_slope * x;
      ss += r * r;
    }
    est.scatter_rms = std::sqrt(ss / pts.size());
  } else {
    est.raw_slope = lf.slope;
    est.offset = lf.intercept;
    est.scatter_rms = lf.rms;
  }
  est.beta_hat = std::max(1.0, est.raw_slope);
  return est;
}

}  // namespace greendyn
