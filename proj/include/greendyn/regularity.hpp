#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "greendyn/greens.hpp"
#include "greendyn/map.hpp"

namespace greendyn {

struct ChiTopSampler {
  enum Kind { GRID, JULIA } kind = GRID;
  int resolution = 17;       // chart-grid resolution (GRID)
  int samples = 2000;        // inverse-iteration windows (JULIA)
  Cplx c = Cplx(0);          // quadratic-family parameter (JULIA)
  std::uint64_t seed = 1;
  int warmup = 500;
};

struct ChiTopResult {
  double estimate = 0;  // (1/n) log max chain product: a lower estimate
  int n = 0;
  int orbits_used = 0;
  int orbits_skipped = 0;  // hit indeterminacy or an unevaluable differential
};

// Largest n-step chain-rule derivative growth over the sample set.  The GRID
// sampler walks the deterministic chart cover (nested under res -> 2res-1, so
// refinement never decreases the estimate).  The JULIA sampler (quadratic
// family) walks random inverse-iteration branches started at the repelling
// fixed point, plus the two constant-branch walks so period-one extremes are
// always represented.
ChiTopResult chi_top(const FloatMap& f, int n, const ChiTopSampler& sampler);

struct PairRegion {
  int chart = 0;
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  Cplx slice = Cplx(0);
  std::vector<Cplx> anchors;  // optional: half the bases are drawn log-radially
                              // around these (targets suspected modulus extremes)
};

struct PairSample {
  Cplx x, y;   // chart coordinates of the pair
  double d = 0;        // chordal distance of the embedded points
  double delta_g = 0;  // |g_n(x) - g_n(y)|
};

struct PairSampleSet {
  std::vector<PairSample> entries;
  int n = 30;
  PairRegion region;
  int attempts = 0;
};

// Pairs (x, x + s e^{i phi}) per scale s with g_n evaluated on both; orbits
// hitting indeterminacy are dropped.  Deterministic for a fixed seed via
// per-sample substreams.  Throws insufficient_spread when fewer than 10% of
// attempts survive.
PairSampleSet sample_pairs(const FloatMap& f, const PairRegion& region, int n, int count,
                           const std::vector<double>& scales, std::uint64_t seed);

enum class ModulusFamily { HOLDER, H_ALPHA, PHI_ALPHA };

struct ModulusFit {
  ModulusFamily family = ModulusFamily::HOLDER;
  double alpha_hat = 0;
  double intercept = 0;
  double residual_rms = 0;
  int sample_count = 0;
  double d_min = 0, d_max = 0;
};

// Least-squares slope in the family's transformed coordinates, fitted to the
// per-scale upper envelope (max delta_g over log-spaced d buckets), which is
// what the moduli bound.  HOLDER: log dg vs log d; H_ALPHA: log dg vs
// -sqrt|ln d|; PHI_ALPHA: -log dg vs log|ln d|.  Requires >= 30 positive
// entries spanning >= 3 decades of d.
ModulusFit fit_modulus(const PairSampleSet& samples, ModulusFamily family);

std::string family_name(ModulusFamily f);
std::string fit_report_line(const ModulusFit& fit);

struct BetaEstimate {
  double beta_hat = 1;     // clamped below at 1
  double raw_slope = 0;    // unclamped LS slope
  double offset = 0;       // intercept: the empirical log C
  double scatter_rms = 0;
  int steps_used = 0;
};

// Orbit-separation exponent: over recorded orbit steps with d(x, I-hat) <
// 0.1, LS slope of log d(fx, I-hat) against log d(x, I-hat).  Throws
// insufficient_spread when no step enters the near region.
BetaEstimate beta_estimate(const FloatMap& f, const std::vector<ProjectivePoint>& indet_approx,
                           const std::vector<ProjectivePoint>& orbit_seeds, int n);

}  // namespace greendyn
