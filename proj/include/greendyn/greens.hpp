#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "greendyn/map.hpp"

namespace greendyn {

// One-step growth cocycle: (1/deg) log ||F(u)|| on the unit lift u of x.
// Scale invariance of ||F(x^)|| / ||x^||^deg makes the lift choice immaterial.
double gamma_cocycle(const FloatMap& f, const ProjectivePoint& x, double tol = kIndetTol);

// Deterministic quasi-uniform cover of P^dim used by sup estimators: closed
// res-per-axis grids over the unit bidisk of each affine chart for P^1, a
// prefix-nested Kronecker sequence of res^2 points per chart for P^2, plus
// every chart center.  Prefix nesting keeps sup estimates monotone under
// refinement.
std::vector<ProjectivePoint> chart_samples(int dim, int res);

// Grid sup of the cocycle plus a small Lipschitz-scaled cushion; an upper
// estimate of sup gamma, not certified.  Consumed as the shift that makes the
// shifted cocycle <= 0 (monotone Green partial sums).
double sup_gamma(const FloatMap& f, int grid_resolution);

struct GreenOptions {
  int n = 30;          // series truncation depth
  double shift = 0.0;  // subtracted from the cocycle at every step
  double tol = kIndetTol;
};

struct GreenResult {
  double value = 0;      // g_n(x)
  int steps = 0;
  double last_term = 0;  // final increment, a cheap tail estimate
};

// Partial sum g_n(x) = sum_{j<n} d^{-j} (gamma(f^j x) - shift).  With zero
// shift this telescopes to d^{-n} log ||F^(n)(u)|| on the unit lift, which is
// how it is evaluated: one renormalized orbit, no composed iterates.  Throws
// orbit_hits_indeterminacy when the orbit lands on the common zero set.
GreenResult green_partial(const FloatMap& f, const ProjectivePoint& x,
                          const GreenOptions& opt = {});

struct OrbitLogRow {
  ProjectivePoint x;
  double gamma_shifted = 0;  // gamma(x) - shift
  double dist_indet = 1;     // chordal distance to the supplied indeterminacy set
};

struct GreenSeries {
  ProjectivePoint point;
  int n = 0;
  double lambda = 2;
  double shift = 0;
  std::vector<double> partials;    // g_0..g_m, g_0 = 0; m = n unless truncated
  std::vector<OrbitLogRow> orbit;  // one row per evaluated step
  bool truncated = false;          // orbit hit indeterminacy before depth n
  int truncated_at = -1;
};

// Full series record.  Indeterminacy along the orbit truncates and flags
// instead of throwing; `indet` (if supplied) feeds the per-row distances.
GreenSeries green_series(const FloatMap& f, const ProjectivePoint& x, int n, double shift = 0,
                         const std::vector<ProjectivePoint>& indet = {}, double tol = kIndetTol);

// Heuristic tail bound M lambda^{-n} / (1 - 1/lambda) where M bounds the
// shifted cocycle via the calibrated model |C log d + C'| on the recorded
// orbit distances.  A modeling estimate (distances assumed not to shrink
// faster than recorded), not a certificate.
double green_tail_bound(const GreenSeries& s, double C, double Cprime);

// Reference potential for w -> w^2 + c on the affine line: lim 2^{-n} log+ |w_n|.
// Escape-time evaluation with a certified-small truncation error once the
// orbit passes 1e10.
double affine_green(Cplx c, Cplx z, int max_iter = 64);

// Affine chart embeddings: chart k places the 1 in coordinate k; the moving
// affine coordinate is z and (on P^2) the remaining one is pinned to `slice`.
ProjectivePoint chart_point(int dim, int chart, Cplx z, Cplx slice = Cplx(0));

struct GridSpec {
  double x0 = -2, x1 = 2, y0 = -2, y1 = 2;
  int nx = 64, ny = 64;
  int chart = 0;
  Cplx slice = Cplx(0);
};

// Row-major ny*nx values of green_partial over the window; pixels whose orbit
// hits indeterminacy come back NaN.  Rows are dealt round-robin to threads, so
// output is independent of the thread count.
std::vector<double> green_grid(const FloatMap& f, const GridSpec& spec,
                               const GreenOptions& opt, int threads = 1);

}  // namespace greendyn
