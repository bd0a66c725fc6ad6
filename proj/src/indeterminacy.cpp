#include "greendyn/indeterminacy.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "greendyn/errors.hpp"
#include "greendyn/gcd.hpp"
#include "greendyn/greens.hpp"

namespace greendyn {

namespace {

constexpr double kResidualRel = 1e-10;  // acceptance threshold per component, of its l1 scale

// Coefficients of p(a, b, z2) as a univariate polynomial in z2.
std::vector<Cplx> z2_profile(const FloatPoly& p, Cplx a, Cplx b) {
  std::vector<Cplx> out(p.degree + 1, Cplx(0));
  for (const auto& [ex, c] : p.terms) {
    Cplx v = c;
    for (int i = 0; i < ex.e[0]; ++i) v *= a;
    for (int i = 0; i < ex.e[1]; ++i) v *= b;
    out[ex.e[2]] += v;
  }
  return out;
}

int z2_degree(const FloatPoly& p) {
  int d = 0;
  for (const auto& [ex, c] : p.terms)
    if (std::abs(c) > 0) d = std::max(d, ex.e[2]);
  return d;
}

// Sylvester determinant of two univariate coefficient vectors of fixed
// nominal degrees (ma, mb); empty matrix gives 1.
Cplx sylvester_det(const std::vector<Cplx>& A, int ma, const std::vector<Cplx>& B, int mb) {
  int n = ma + mb;
  if (n == 0) return Cplx(1);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < mb; ++r)
    for (int k = 0; k <= ma; ++k) S(r, r + ma - k) = k < static_cast<int>(A.size()) ? A[k] : Cplx(0);
  for (int r = 0; r < ma; ++r)
    for (int k = 0; k <= mb; ++k)
      S(mb + r, r + mb - k) = k < static_cast<int>(B.size()) ? B[k] : Cplx(0);
  return Eigen::FullPivLU<Eigen::MatrixXcd>(S).determinant();
}

// Roots of sum c_j t^j after trimming negligible leading coefficients.
std::vector<Cplx> poly_roots(std::vector<Cplx> c, double rel_trim = 1e-10) {
  double m = 0;
  for (auto& v : c) m = std::max(m, std::abs(v));
  if (m == 0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= rel_trim * m) c.pop_back();
  int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = Cplx(1);
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Cplx> out;
  for (int i = 0; i < deg; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

std::array<Cplx, 3> eval_components(const FloatMap& f, const std::array<Cplx, 3>& u) {
  std::array<Cplx, 3> v{Cplx(0), Cplx(0), Cplx(0)};
  for (int i = 0; i <= f.dim; ++i) v[i] = poly_eval(f.comp[i], u);
  return v;
}

// Gauss-Newton on the unit sphere minimizing the joint component residual.
std::array<Cplx, 3> polish(const FloatMap& f, std::array<Cplx, 3> u) {
  auto renorm = [&](std::array<Cplx, 3>& w) {
    double n = 0;
    for (int i = 0; i < 3; ++i) n += std::norm(w[i]);
    n = std::sqrt(n);
    if (n > 0)
      for (int i = 0; i < 3; ++i) w[i] /= n;
  };
  renorm(u);
  for (int it = 0; it < 25; ++it) {
    Eigen::Vector3cd P;
    Eigen::Matrix3cd J;
    auto v = eval_components(f, u);
    double res = 0;
    for (int i = 0; i < 3; ++i) {
      P(i) = v[i];
      res += std::norm(v[i]);
      for (int j = 0; j < 3; ++j) J(i, j) = poly_eval(f.comp[i].derivative(j), u);
    }
    if (std::sqrt(res) < 1e-15) break;
    Eigen::Vector3cd step =
        J.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-P);
    if (!step.allFinite()) break;
    for (int i = 0; i < 3; ++i) u[i] += step(i);
    renorm(u);
  }
  return u;
}

bool residual_ok(const FloatMap& f, const std::array<Cplx, 3>& u) {
  for (int i = 0; i <= f.dim; ++i) {
    double scale = f.comp[i].l1_norm();
    if (std::abs(poly_eval(f.comp[i], u)) > kResidualRel * (scale > 0 ? scale : 1.0)) return false;
  }
  return true;
}

// Restriction of the components to the projective line {z0 = a s, z1 = b s}
// (parameter tau = z2 relative to s): candidate points on that line, or the
// whole line when every component vanishes on it.
void line_candidates(const FloatMap& f, Cplx a, Cplx b, std::vector<std::array<Cplx, 3>>& cand,
                     bool& whole_line) {
  whole_line = true;
  std::vector<Cplx> roots;
  for (int i = 0; i <= f.dim && whole_line; ++i) {
    auto prof = z2_profile(f.comp[i], a, b);
    double m = 0, scale = std::max(f.comp[i].l1_norm(), 1.0);
    for (auto& v : prof) m = std::max(m, std::abs(v));
    if (m > 1e-12 * scale) {
      whole_line = false;
      roots = poly_roots(prof);
    }
  }
  if (whole_line) return;
  for (Cplx t : roots)
    if (std::isfinite(t.real()) && std::isfinite(t.imag())) cand.push_back({a, b, t});
}

}  // namespace

std::vector<ProjectivePoint> indeterminacy_points(const FloatMap& f) {
  f.validate();
  if (f.dim == 1) return {};  // coprime binary forms share no projective zero
  const int d = f.degree();

  // A coordinate line on which every component vanishes identically is a
  // positive-dimensional base locus the elimination below cannot see when the
  // surviving pair happens to ignore z2, so screen for it up front.
  for (int v = 0; v < 3; ++v) {
    bool all_vanish = true;
    for (int i = 0; i <= f.dim && all_vanish; ++i) {
      double m = 0, scale = std::max(f.comp[i].l1_norm(), 1.0);
      for (const auto& [ex, c] : f.comp[i].terms)
        if (ex.e[v] == 0) m = std::max(m, std::abs(c));
      if (m > 1e-12 * scale) all_vanish = false;
    }
    if (all_vanish)
      throw positive_dimensional_locus(
          "indeterminacy_points: all components vanish on a coordinate line");
  }

  // Eliminate z2 from the first component pair whose resultant is not
  // identically zero (a vanishing one only means that pair shares a factor).
  // Pairs in which neither component uses z2 have an empty Sylvester matrix
  // whose determinant 1 carries no elimination content, so skip them too.
  static const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<Cplx> r;  // resultant profile r(t) = Res(1, t), t = z1/z0
  bool have_pair = false;
  for (auto& pr : pairs) {
    const FloatPoly& A = f.comp[pr[0]];
    const FloatPoly& B = f.comp[pr[1]];
    int ma = z2_degree(A), mb = z2_degree(B);
    if (ma + mb == 0) continue;
    int samples = 2 * d * d + 1;
    std::vector<Cplx> vals(samples);
    double m = 0;
    for (int k = 0; k < samples; ++k) {
      double ang = 2.0 * M_PI * k / samples;
      Cplx t(std::cos(ang), std::sin(ang));
      vals[k] = sylvester_det(z2_profile(A, Cplx(1), t), ma, z2_profile(B, Cplx(1), t), mb);
      m = std::max(m, std::abs(vals[k]));
    }
    if (m <= 1e-12 * std::max(A.l1_norm(), 1.0) * std::max(B.l1_norm(), 1.0))
      continue;  // degenerate pair
    // Inverse DFT for the coefficients of r(t).
    r.assign(samples, Cplx(0));
    for (int j = 0; j < samples; ++j) {
      Cplx acc(0);
      for (int k = 0; k < samples; ++k) {
        double ang = -2.0 * M_PI * j * k / samples;
        acc += vals[k] * Cplx(std::cos(ang), std::sin(ang));
      }
      r[j] = acc / static_cast<double>(samples);
    }
    have_pair = true;
    break;
  }
  if (!have_pair)
    throw positive_dimensional_locus(
        "indeterminacy_points: every component pair shares a factor or ignores z2");

  std::vector<std::array<Cplx, 3>> cand;
  cand.push_back({Cplx(0), Cplx(0), Cplx(1)});  // on the closure of every candidate line
  bool whole_line = false;
  for (Cplx t : poly_roots(r)) {
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) continue;
    line_candidates(f, Cplx(1), t, cand, whole_line);
    if (whole_line)
      throw positive_dimensional_locus("indeterminacy_points: a full line of common zeros");
  }
  // Directions at infinity of the elimination chart.
  line_candidates(f, Cplx(0), Cplx(1), cand, whole_line);
  if (whole_line)
    throw positive_dimensional_locus("indeterminacy_points: a full line of common zeros");

  std::vector<ProjectivePoint> out;
  for (auto& c : cand) {
    auto u = polish(f, c);
    if (!residual_ok(f, u)) continue;
    ProjectivePoint p;
    try {
      p = ProjectivePoint(u[0], u[1], u[2]);
    } catch (const invalid_parameter&) {
      continue;
    }
    bool dup = false;
    for (const auto& q : out)
      if (chordal_dist(p, q) < 1e-6) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  auto key = [](const ProjectivePoint& p) {
    return std::array<double, 6>{p.c[0].real(), p.c[0].imag(), p.c[1].real(),
                                 p.c[1].imag(), p.c[2].real(), p.c[2].imag()};
  };
  std::sort(out.begin(), out.end(),
            [&](const ProjectivePoint& x, const ProjectivePoint& y) { return key(x) < key(y); });
  return out;
}

namespace {

// Substitute z_var = 0: the surviving terms form a binary form in the other
// two variables.
ExactPoly restrict_line(const ExactPoly& p, int var) {
  ExactPoly r(p.nvars, p.degree);
  for (const auto& [ex, c] : p.terms)
    if (ex.e[var] == 0) r.add_term(ex, c);
  return r;
}

// Exact roots of a binary form in variables (va, vb): monomial factors give
// the two vertices; what remains must be linear to stay representable.
void exact_form_roots(const ExactPoly& g, int va, int vb,
                      std::vector<std::pair<GaussRational, GaussRational>>& roots) {
  if (g.is_zero() || g.degree == 0) return;
  int min_a = g.degree, min_b = g.degree;
  for (const auto& [ex, c] : g.terms) {
    min_a = std::min(min_a, ex.e[va]);
    min_b = std::min(min_b, ex.e[vb]);
  }
  if (min_a > 0) roots.emplace_back(GaussRational{0}, GaussRational{1});  // z_va = 0
  if (min_b > 0) roots.emplace_back(GaussRational{1}, GaussRational{0});  // z_vb = 0
  int core_deg = g.degree - min_a - min_b;
  if (core_deg == 0) return;
  if (core_deg > 1)
    throw invalid_parameter("indeterminacy_points_exact: line gcd has a nonlinear factor");
  // c_hi * z_va + c_lo * z_vb with exponents shifted by the monomial content.
  GaussRational c_hi, c_lo;
  for (const auto& [ex, c] : g.terms) {
    if (ex.e[va] == min_a + 1) c_hi = c;
    if (ex.e[vb] == min_b + 1) c_lo = c;
  }
  roots.emplace_back(-c_lo, c_hi);  // z_va/z_vb = -c_lo/c_hi
}

}  // namespace

std::vector<ExactPoint> indeterminacy_points_exact(const ExactMap& f) {
  f.validate();
  if (f.dim == 1) return {};
  std::vector<ExactPoint> out;
  auto push_unique = [&](const ExactPoint& p) {
    for (const auto& q : out)
      if (q == p) return;
    out.push_back(p);
  };
  for (int var = 0; var < 3; ++var) {
    int va = var == 0 ? 1 : 0;
    int vb = var == 2 ? 1 : 2;
    std::vector<ExactPoly> restr;
    for (int i = 0; i <= f.dim; ++i) {
      ExactPoly r = restrict_line(f.comp[i], var);
      if (!r.is_zero()) restr.push_back(r);
    }
    if (restr.empty())
      throw positive_dimensional_locus("indeterminacy_points_exact: a coordinate line vanishes");
    ExactPoly g = multi_gcd(restr);
    std::vector<std::pair<GaussRational, GaussRational>> roots;
    exact_form_roots(g, va, vb, roots);
    for (auto& [ra, rb] : roots) {
      std::array<GaussRational, 3> c;
      c[var] = GaussRational{};
      c[va] = ra;
      c[vb] = rb;
      ExactPoint p(c[0], c[1], c[2]);
      if (is_indeterminate(f, p)) push_unique(p);
    }
  }
  // Guard against zeros away from the coordinate lines: every numeric point
  // must be matched by an exact one.
  auto numeric = indeterminacy_points(to_float(f));
  for (const auto& np : numeric) {
    bool matched = false;
    for (const auto& ep : out)
      if (chordal_dist(np, ep.to_float()) < 1e-8) {
        matched = true;
        break;
      }
    if (!matched)
      throw invalid_parameter(
          "indeterminacy_points_exact: numeric solver found a point off the coordinate lines");
  }
  return out;
}

namespace {

double min_dist_to(const ProjectivePoint& p, const std::vector<ProjectivePoint>& set) {
  double best = 1.0;
  for (const auto& q : set) best = std::min(best, chordal_dist(p, q));
  return best;
}

}  // namespace

OrbitTable backward_orbit(const FloatMap& f_inv, const std::vector<ProjectivePoint>& points,
                          int N, double tol) {
  f_inv.validate();
  if (N < 0) throw invalid_parameter("backward_orbit: negative depth");
  OrbitTable t;
  t.source = points;
  t.depth = N;
  if (f_inv.dim == 2) t.target = indeterminacy_points(f_inv);
  for (const auto& p0 : points) {
    std::vector<OrbitRow> col;
    ProjectivePoint p = p0;
    for (int n = 0; n <= N; ++n) {
      OrbitRow row;
      row.n = n;
      row.p = p;
      row.dist_to_target = min_dist_to(p, t.target);
      try {
        row.gamma_minus = gamma_cocycle(f_inv, p, tol);
      } catch (const indeterminate_point&) {
        row.gamma_minus = std::numeric_limits<double>::quiet_NaN();
        row.terminal = true;
      }
      if (!row.terminal && n < N) {
        try {
          p = map_eval(f_inv, p, tol);
        } catch (const indeterminate_point&) {
          row.terminal = true;
        }
      }
      col.push_back(row);
      if (row.terminal) break;
    }
    t.rows.push_back(std::move(col));
  }
  return t;
}

StabilityReport stability_check(const FloatMap& f, const FloatMap& f_inv, int N, double tol) {
  StabilityReport rep;
  rep.route = "backward-orbit";
  rep.n_checked = N;
  auto I_f = indeterminacy_points(f);
  if (I_f.empty()) {
    rep.verdict = StabilityVerdict::STABLE_UP_TO_N;
    return rep;
  }
  OrbitTable t = backward_orbit(f_inv, I_f, N, tol);
  for (const auto& col : t.rows) {
    for (const auto& row : col) {
      double d = row.terminal ? 0.0 : row.dist_to_target;
      if (d < rep.min_dist || rep.min_dist_n < 0) {
        rep.min_dist = d;
        rep.min_dist_n = row.n;
        rep.witness = row.p;
      }
    }
  }
  if (rep.min_dist > 10 * tol) {
    rep.verdict = StabilityVerdict::STABLE_UP_TO_N;
  } else {
    rep.verdict = StabilityVerdict::VIOLATED;
    rep.violated_at = rep.min_dist_n;
  }
  return rep;
}

StabilityReport stability_check_degrees(const ExactMap& f, int N, const DegreeSequenceCaps& caps) {
  StabilityReport rep;
  rep.route = "degree-sequence";
  int n = std::min(N, caps.max_n);
  rep.n_checked = n;
  auto degs = degree_sequence(f, n, caps);
  int d1 = degs.empty() ? f.degree() : degs[0];
  long long expect = 1;
  for (int i = 0; i < static_cast<int>(degs.size()); ++i) {
    expect *= d1;
    if (degs[i] != expect) {
      rep.verdict = StabilityVerdict::VIOLATED;
      rep.violated_at = i + 1;
      return rep;
    }
  }
  rep.verdict = StabilityVerdict::STABLE_UP_TO_N;
  return rep;
}

namespace {

RecurrenceSum finish_sum(std::vector<double> raw_terms, double lambda, int q,
                         double gamma_shift) {
  RecurrenceSum s;
  s.q = q;
  s.lambda = lambda;
  s.gamma_shift = gamma_shift;
  double w = 1.0;
  double acc = 0.0;
  const double wq = std::pow(lambda, -q);
  for (double t : raw_terms) {
    double term = w * t;
    s.terms.push_back(term);
    acc += term;
    s.partials.push_back(acc);
    w *= wq;
  }
  int N = static_cast<int>(s.partials.size()) - 1;
  int k = std::max(1, N / 4);
  s.tail_delta = N >= 1 ? std::abs(s.partials[N] - s.partials[std::max(0, N - k)]) : 0.0;
  // Trend of the increment magnitudes: a slope near zero or above means the
  // increments are not decaying summably over the window.
  int cnt = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = 0; n <= N; ++n) {
    double m = std::abs(s.terms[n]);
    if (m <= 0) continue;
    double x = n, y = std::log(m);
    ++cnt;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  s.trend_slope = cnt >= 3 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : -1.0;
  double SN = s.partials.empty() ? 0.0 : s.partials.back();
  if (SN < -1e3 || (cnt >= 3 && s.trend_slope > -1e-3))
    s.verdict = RecurrenceVerdict::DIVERGENT_TREND;
  else if (s.tail_delta < 1e-6)
    s.verdict = RecurrenceVerdict::CONVERGENT_TREND;
  else
    s.verdict = RecurrenceVerdict::INCONCLUSIVE;
  return s;
}

}  // namespace

RecurrenceSum recurrence_sum(const OrbitTable& table, double lambda, int q,
                             RecurrenceSource source) {
  if (lambda <= 1) throw invalid_parameter("recurrence_sum: lambda must exceed 1");
  if (q != 1 && q != 2) throw invalid_parameter("recurrence_sum: q must be 1 or 2");
  if (table.rows.empty() || table.depth < 1)
    throw invalid_parameter("recurrence_sum: table has no depth");
  std::vector<double> raw;
  double gamma_shift = 0;
  if (source.kind == RecurrenceSource::LOGDIST) {
    for (int n = 0; n <= table.depth; ++n) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& col : table.rows)
        if (n < static_cast<int>(col.size()))
          best = std::min(best, col[n].terminal ? 0.0 : col[n].dist_to_target);
      if (!std::isfinite(best)) break;  // every column ended earlier
      raw.push_back(std::log(std::max(best, 1e-300)));
    }
  } else {
    if (source.point_index < 0 || source.point_index >= static_cast<int>(table.rows.size()))
      throw invalid_parameter("recurrence_sum: source point index out of range");
    const auto& col = table.rows[source.point_index];
    std::vector<double> g;
    for (const auto& row : col) {
      if (row.terminal) break;
      g.push_back(row.gamma_minus);
    }
    if (g.empty()) throw invalid_parameter("recurrence_sum: column terminal before depth 1");
    for (double v : g) gamma_shift = std::max(gamma_shift, v);
    for (double v : g) raw.push_back(v - gamma_shift);
  }
  if (raw.size() < 2) throw invalid_parameter("recurrence_sum: fewer than two usable rows");
  return finish_sum(std::move(raw), lambda, q, gamma_shift);
}

RecurrenceSum recurrence_sum_logdist(const std::vector<double>& log_dists, double lambda, int q) {
  if (lambda <= 1) throw invalid_parameter("recurrence_sum: lambda must exceed 1");
  if (q != 1 && q != 2) throw invalid_parameter("recurrence_sum: q must be 1 or 2");
  if (log_dists.size() < 2) throw invalid_parameter("recurrence_sum: fewer than two rows");
  for (double v : log_dists)
    if (v > 0) throw invalid_parameter("recurrence_sum: log distances must be <= 0");
  return finish_sum(log_dists, lambda, q, 0.0);
}

}  // namespace greendyn
