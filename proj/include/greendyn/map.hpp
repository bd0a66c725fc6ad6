#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "greendyn/point.hpp"
#include "greendyn/poly.hpp"

namespace greendyn {

// Rational self-map of P^dim given by dim+1 homogeneous components of equal
// degree.  EXACT maps carry Gauss-rational coefficients, FLOAT maps complex
// doubles.
template <class C>
struct ProjectiveMap {
  int dim = 1;
  std::array<HomogeneousPoly<C>, 3> comp;
  std::string label;

  int degree() const { return comp[0].degree; }

  void validate() const {
    int d = comp[0].degree;
    bool any = false;
    for (int i = 0; i <= dim; i++) {
      if (comp[i].nvars != dim + 1) throw dimension_mismatch("component nvars != dim+1");
      if (comp[i].degree != d) throw dimension_mismatch("component degrees differ");
      if (!comp[i].is_zero()) any = true;
    }
    if (!any) throw invalid_parameter("all components zero");
  }
};

using FloatMap = ProjectiveMap<Cplx>;
using ExactMap = ProjectiveMap<GaussRational>;

inline FloatMap to_float(const ExactMap& f) {
  FloatMap r;
  r.dim = f.dim;
  r.label = f.label;
  for (int i = 0; i <= f.dim; i++) r.comp[i] = to_float(f.comp[i]);
  return r;
}

// Default float-mode indeterminacy tolerance, applied per component as
// tol * l1-norm of that component's coefficients, on a unit lift.
constexpr double kIndetTol = 1e-12;

ProjectivePoint map_eval(const FloatMap& f, const ProjectivePoint& x, double tol = kIndetTol);
ExactPoint map_eval(const ExactMap& f, const ExactPoint& x);
bool is_indeterminate(const FloatMap& f, const ProjectivePoint& x, double tol = kIndetTol);
bool is_indeterminate(const ExactMap& f, const ExactPoint& x);

// f after g (evaluate f's components at g's component tuple).
template <class C>
ProjectiveMap<C> compose(const ProjectiveMap<C>& f, const ProjectiveMap<C>& g) {
  if (f.dim != g.dim) throw dimension_mismatch("compose: dim mismatch");
  ProjectiveMap<C> r;
  r.dim = f.dim;
  int df = f.degree();
  // Power tables for g's components.
  std::array<std::vector<HomogeneousPoly<C>>, 3> pw;
  for (int v = 0; v <= g.dim; v++) {
    HomogeneousPoly<C> one(g.dim + 1, 0);
    one.add_term(Exps{}, C(1));
    pw[v].push_back(one);
    for (int e = 1; e <= df; e++) pw[v].push_back(pw[v][e - 1] * g.comp[v]);
  }
  for (int i = 0; i <= f.dim; i++) {
    HomogeneousPoly<C> acc(g.dim + 1, df * g.degree());
    for (auto& [ex, c] : f.comp[i].terms) {
      HomogeneousPoly<C> t(g.dim + 1, 0);
      t.add_term(Exps{}, c);
      for (int v = 0; v <= f.dim; v++)
        if (ex.e[v] > 0) t = t * pw[v][ex.e[v]];
      acc = acc + t;
    }
    r.comp[i] = acc;
  }
  return r;
}

// Divide out the components' joint monomial content (FLOAT mode removes only
// that; EXACT mode also divides by the full multivariate GCD).
FloatMap normalize(const FloatMap& f);
ExactMap normalize(const ExactMap& f);

struct DegreeSequenceCaps {
  std::size_t max_terms = 1'000'000;
  int max_n = 8;
};

// Degrees [d_1..d_N] of the normalized iterates f, f^2, ..., f^N.
std::vector<int> degree_sequence(const ExactMap& f, int n,
                                 const DegreeSequenceCaps& caps = {});

// Largest singular value of the chart differential at x, in the Fubini-Study
// metric (infinitesimal form of the chordal distance).
double jacobian_norm(const FloatMap& f, const ProjectivePoint& x, double tol = kIndetTol);

}  // namespace greendyn
