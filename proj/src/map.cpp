#include "greendyn/map.hpp"

#include <cstdint>

#include <Eigen/Dense>

#include "greendyn/gcd.hpp"

namespace greendyn {
namespace {

struct EvalResult {
  std::array<Cplx, 3> vals{};
  bool all_small = true;
};

EvalResult eval_on_unit_lift(const FloatMap& f, const ProjectivePoint& x, double tol) {
  if (x.dim != f.dim) throw dimension_mismatch("map_eval: point/map dim mismatch");
  auto u = x.unit_lift();
  EvalResult r;
  for (int i = 0; i <= f.dim; i++) {
    r.vals[i] = poly_eval(f.comp[i], u);
    if (std::abs(r.vals[i]) > tol * f.comp[i].l1_norm()) r.all_small = false;
  }
  return r;
}

template <class C>
std::array<int, 3> joint_monomial_content(const ProjectiveMap<C>& f) {
  std::array<int, 3> m{INT32_MAX, INT32_MAX, INT32_MAX};
  for (int i = 0; i <= f.dim; i++) {
    if (f.comp[i].is_zero()) continue;
    std::array<int, 3> mi{INT32_MAX, INT32_MAX, INT32_MAX};
    for (auto& [e, c] : f.comp[i].terms)
      for (int v = 0; v < 3; v++) mi[v] = std::min(mi[v], e.e[v]);
    for (int v = 0; v < 3; v++) m[v] = std::min(m[v], mi[v]);
  }
  for (int v = 0; v < 3; v++)
    if (m[v] == INT32_MAX) m[v] = 0;
  return m;
}

template <class C>
HomogeneousPoly<C> shift_down(const HomogeneousPoly<C>& p, const std::array<int, 3>& m) {
  HomogeneousPoly<C> r(p.nvars, p.degree - m[0] - m[1] - m[2]);
  for (auto& [e, c] : p.terms) {
    Exps ne;
    for (int v = 0; v < 3; v++) ne.e[v] = e.e[v] - m[v];
    r.add_term(ne, c);
  }
  return r;
}

template <class C>
ProjectiveMap<C> strip_monomial_content(const ProjectiveMap<C>& f) {
  auto m = joint_monomial_content(f);
  if (m[0] + m[1] + m[2] == 0) return f;
  ProjectiveMap<C> r;
  r.dim = f.dim;
  r.label = f.label;
  for (int i = 0; i <= f.dim; i++) r.comp[i] = shift_down(f.comp[i], m);
  return r;
}

}  // namespace

ProjectivePoint map_eval(const FloatMap& f, const ProjectivePoint& x, double tol) {
  EvalResult r = eval_on_unit_lift(f, x, tol);
  if (r.all_small) throw indeterminate_point("map_eval at indeterminacy point");
  return f.dim == 1 ? ProjectivePoint(r.vals[0], r.vals[1])
                    : ProjectivePoint(r.vals[0], r.vals[1], r.vals[2]);
}

bool is_indeterminate(const FloatMap& f, const ProjectivePoint& x, double tol) {
  return eval_on_unit_lift(f, x, tol).all_small;
}

ExactPoint map_eval(const ExactMap& f, const ExactPoint& x) {
  if (x.dim != f.dim) throw dimension_mismatch("map_eval: point/map dim mismatch");
  std::array<GaussRational, 3> vals;
  bool all_zero = true;
  for (int i = 0; i <= f.dim; i++) {
    vals[i] = poly_eval_exact(f.comp[i], x.c);
    if (!vals[i].is_zero()) all_zero = false;
  }
  if (all_zero) throw indeterminate_point("map_eval at indeterminacy point");
  return f.dim == 1 ? ExactPoint(vals[0], vals[1]) : ExactPoint(vals[0], vals[1], vals[2]);
}

bool is_indeterminate(const ExactMap& f, const ExactPoint& x) {
  if (x.dim != f.dim) throw dimension_mismatch("is_indeterminate: dim mismatch");
  for (int i = 0; i <= f.dim; i++)
    if (!poly_eval_exact(f.comp[i], x.c).is_zero()) return false;
  return true;
}

FloatMap normalize(const FloatMap& f) { return strip_monomial_content(f); }

ExactMap normalize(const ExactMap& f) {
  ExactMap g = strip_monomial_content(f);
  if (g.degree() == 0) return g;
  // Any common factor of all components divides the gcd of one coprime pair,
  // so a single certified pair settles it without a full PRS run.
  for (int i = 0; i <= g.dim; i++)
    for (int j = i + 1; j <= g.dim; j++)
      if (!g.comp[i].is_zero() && !g.comp[j].is_zero() &&
          certify_coprime(g.comp[i], g.comp[j]))
        return g;
  std::vector<ExactPoly> comps;
  for (int i = 0; i <= g.dim; i++)
    if (!g.comp[i].is_zero()) comps.push_back(g.comp[i]);
  ExactPoly d = multi_gcd(comps);
  if (d.degree == 0) return g;
  ExactMap r;
  r.dim = g.dim;
  r.label = g.label;
  for (int i = 0; i <= g.dim; i++)
    r.comp[i] = g.comp[i].is_zero() ? HomogeneousPoly<GaussRational>(g.dim + 1, g.degree() - d.degree)
                                    : exact_divide(g.comp[i], d);
  return r;
}

std::vector<int> degree_sequence(const ExactMap& f, int n, const DegreeSequenceCaps& caps) {
  f.validate();
  if (n < 1) throw invalid_parameter("degree_sequence: n must be >= 1");
  if (n > caps.max_n) throw resource_limit("degree_sequence: n exceeds iterate cap");
  ExactMap f1 = normalize(f);
  ExactMap g = f1;
  std::vector<int> out{g.degree()};
  for (int k = 2; k <= n; k++) {
    g = compose(f1, g);
    std::size_t terms = 0;
    for (int i = 0; i <= g.dim; i++) terms += g.comp[i].terms.size();
    if (terms > caps.max_terms) throw resource_limit("degree_sequence: term budget exceeded");
    g = normalize(g);
    out.push_back(g.degree());
  }
  return out;
}

double jacobian_norm(const FloatMap& f, const ProjectivePoint& x, double tol) {
  EvalResult r = eval_on_unit_lift(f, x, tol);
  if (r.all_small) throw indeterminate_point("jacobian_norm at indeterminacy point");
  int n = f.dim + 1;
  auto u = x.unit_lift();
  Eigen::VectorXcd uv(n), yv(n);
  for (int i = 0; i < n; i++) uv(i) = u[i];
  double fnorm = 0;
  for (int i = 0; i < n; i++) fnorm += std::norm(r.vals[i]);
  fnorm = std::sqrt(fnorm);
  for (int i = 0; i < n; i++) yv(i) = r.vals[i] / fnorm;
  Eigen::MatrixXcd J(n, n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) J(i, j) = poly_eval(f.comp[i].derivative(j), u);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  // Chart-free Fubini-Study differential: restrict to the orthogonal
  // complement of the fiber direction on both sides.
  Eigen::MatrixXcd M =
      (I - yv * yv.adjoint()) * J * (I - uv * uv.adjoint()) / fnorm;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

}  // namespace greendyn
