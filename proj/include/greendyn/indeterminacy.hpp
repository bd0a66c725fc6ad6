#pragma once
#include <string>
#include <vector>

#include "greendyn/map.hpp"

namespace greendyn {

// All common zeros of the components, assumed finite.  Pipeline: pairwise
// resultant eliminating z2 (falling back across component pairs when a pair
// shares a factor), companion-matrix roots of the resulting binary form,
// candidate lines solved by restriction, Gauss-Newton polish on all
// components jointly, then an independent residual check at 1e-10 of each
// component's l1 scale.  Throws positive_dimensional_locus when a whole line
// of common zeros survives.
std::vector<ProjectivePoint> indeterminacy_points(const FloatMap& f);

// Exact common zeros restricted to the three coordinate lines (which carry
// the entire locus for every built-in exact family; cross-checked against the
// numeric solver in tests).  Points whose line gcd has an irrational root are
// not representable exactly and raise invalid_parameter.
std::vector<ExactPoint> indeterminacy_points_exact(const ExactMap& f);

struct OrbitRow {
  int n = 0;
  ProjectivePoint p;
  double dist_to_target = 1;  // chordal distance to the supplied target set
  double gamma_minus = 0;     // cocycle of the backward map at p
  bool terminal = false;      // backward orbit hit the backward map's indeterminacy
};

struct OrbitTable {
  std::vector<ProjectivePoint> source;   // labeled p0, p1, ... in order
  std::vector<ProjectivePoint> target;   // distance reference set
  int depth = 0;
  std::vector<std::vector<OrbitRow>> rows;  // rows[s][n], truncated after a terminal row
};

// Backward orbit table: rows[s][n] = f_inv^n applied to points[s], with
// distances to the indeterminacy set of f_inv (computed here) and the f_inv
// cocycle per row.  A terminal row ends its column.
OrbitTable backward_orbit(const FloatMap& f_inv, const std::vector<ProjectivePoint>& points,
                          int N, double tol = kIndetTol);

enum class StabilityVerdict { STABLE_UP_TO_N, VIOLATED, INCONCLUSIVE };

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::INCONCLUSIVE;
  int n_checked = 0;
  int violated_at = -1;
  double min_dist = 1;
  int min_dist_n = -1;
  ProjectivePoint witness;
  std::string route;  // "backward-orbit" or "degree-sequence"
};

// Backward-orbit route: min over n <= N of dist(f^{-n} I_f, I_{f_inv}).
// STABLE_UP_TO_N when the minimum stays above 10*tol; a backward orbit
// landing on I_{f_inv} is a violation at that step.
StabilityReport stability_check(const FloatMap& f, const FloatMap& f_inv, int N,
                                double tol = kIndetTol);

// Degree-sequence route for maps without a usable inverse: violated at the
// first n with deg(f^n) != (deg f)^n.
StabilityReport stability_check_degrees(const ExactMap& f, int N,
                                        const DegreeSequenceCaps& caps = {});

enum class RecurrenceVerdict { CONVERGENT_TREND, DIVERGENT_TREND, INCONCLUSIVE };

struct RecurrenceSource {
  enum Kind { LOGDIST, GAMMA } kind = LOGDIST;
  int point_index = 0;  // source column for GAMMA
};

struct RecurrenceSum {
  int q = 2;
  double lambda = 2;
  std::vector<double> terms;     // weighted summands, all <= 0
  std::vector<double> partials;  // S_0..S_N
  RecurrenceVerdict verdict = RecurrenceVerdict::INCONCLUSIVE;
  double tail_delta = 0;    // |S_N - S_{N-k}|, k = N/4
  double trend_slope = 0;   // LS slope of log|increment| against n
  double gamma_shift = 0;   // subtracted from GAMMA summands to keep them <= 0
};

// Partial sums S_N = sum_{n<=N} lambda^{-qn} t_n where t_n is, per source,
// the min over columns of log dist_to_target at depth n (LOGDIST) or the
// shifted cocycle along one column (GAMMA).  Verdicts are trend diagnostics
// over the computed window, never proofs; the divergence checks take
// precedence over the convergence check.
RecurrenceSum recurrence_sum(const OrbitTable& table, double lambda, int q,
                             RecurrenceSource source = {});

// Same statistic fed directly with per-step natural-log distances, for
// schedules whose distances underflow doubles and exist only in log form.
RecurrenceSum recurrence_sum_logdist(const std::vector<double>& log_dists, double lambda, int q);

}  // namespace greendyn
