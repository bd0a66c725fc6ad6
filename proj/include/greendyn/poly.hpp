#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "greendyn/errors.hpp"
#include "greendyn/gauss_rational.hpp"

namespace greendyn {

using Cplx = std::complex<double>;

// Exponent vector for up to 3 variables; unused slots stay 0.
struct Exps {
  std::array<int, 3> e{0, 0, 0};
  int total() const { return e[0] + e[1] + e[2]; }
  friend bool operator<(const Exps& a, const Exps& b) { return a.e < b.e; }
  friend bool operator==(const Exps& a, const Exps& b) { return a.e == b.e; }
};

namespace coeff {
inline bool is_zero(const GaussRational& c) { return c.is_zero(); }
inline bool is_zero(const Cplx& c) { return c == Cplx{0.0, 0.0}; }
inline double abs_value(const GaussRational& c) { return std::abs(c.to_complex()); }
inline double abs_value(const Cplx& c) { return std::abs(c); }
}  // namespace coeff

// Homogeneous polynomial in `nvars` variables, sparse term map.
// Invariant: every stored term has total exponent == degree and nonzero coefficient.
template <class C>
struct HomogeneousPoly {
  int nvars = 2;
  int degree = 0;
  std::map<Exps, C> terms;

  HomogeneousPoly() = default;
  HomogeneousPoly(int nv, int deg) : nvars(nv), degree(deg) {}

  bool is_zero() const { return terms.empty(); }

  void add_term(const Exps& ex, const C& c) {
    if (coeff::is_zero(c)) return;
    if (ex.total() != degree) throw invalid_parameter("term degree mismatch");
    for (int i = nvars; i < 3; i++)
      if (ex.e[i] != 0) throw invalid_parameter("exponent outside variable range");
    auto it = terms.find(ex);
    if (it == terms.end()) {
      terms.emplace(ex, c);
    } else {
      it->second = it->second + c;
      if (coeff::is_zero(it->second)) terms.erase(it);
    }
  }

  friend HomogeneousPoly operator+(const HomogeneousPoly& a, const HomogeneousPoly& b) {
    if (a.nvars != b.nvars || a.degree != b.degree)
      throw dimension_mismatch("poly add: shape mismatch");
    HomogeneousPoly r = a;
    for (auto& [ex, c] : b.terms) r.add_term(ex, c);
    return r;
  }

  friend HomogeneousPoly operator*(const HomogeneousPoly& a, const HomogeneousPoly& b) {
    if (a.nvars != b.nvars) throw dimension_mismatch("poly mul: nvars mismatch");
    HomogeneousPoly r(a.nvars, a.degree + b.degree);
    for (auto& [ea, ca] : a.terms)
      for (auto& [eb, cb] : b.terms) {
        Exps ex;
        for (int i = 0; i < 3; i++) ex.e[i] = ea.e[i] + eb.e[i];
        r.add_term(ex, ca * cb);
      }
    return r;
  }

  HomogeneousPoly scaled(const C& s) const {
    HomogeneousPoly r(nvars, degree);
    if (coeff::is_zero(s)) return r;
    for (auto& [ex, c] : terms) {
      C sc = c * s;
      if (!coeff::is_zero(sc)) r.terms.emplace(ex, sc);
    }
    return r;
  }

  // d/dz_v; homogeneous of degree-1 (zero poly if degree 0).
  HomogeneousPoly derivative(int v) const {
    HomogeneousPoly r(nvars, degree > 0 ? degree - 1 : 0);
    for (auto& [ex, c] : terms) {
      if (ex.e[v] == 0) continue;
      Exps dx = ex;
      dx.e[v] -= 1;
      r.add_term(dx, c * C(ex.e[v]));
    }
    return r;
  }

  double l1_norm() const {
    double s = 0;
    for (auto& [ex, c] : terms) s += coeff::abs_value(c);
    return s;
  }
};

using FloatPoly = HomogeneousPoly<Cplx>;
using ExactPoly = HomogeneousPoly<GaussRational>;

template <class C, class V>
V poly_eval_impl(const HomogeneousPoly<C>& p, const std::array<V, 3>& lift) {
  // Powers cached per variable up to the degree actually used.
  std::array<std::vector<V>, 3> pw;
  for (int v = 0; v < 3; v++) pw[v].push_back(V(1));
  V acc(0);
  for (auto& [ex, c] : p.terms) {
    V t(1);
    for (int v = 0; v < p.nvars; v++) {
      while ((int)pw[v].size() <= ex.e[v]) pw[v].push_back(pw[v].back() * lift[v]);
      t = t * pw[v][ex.e[v]];
    }
    if constexpr (std::is_same_v<C, V>) {
      acc = acc + c * t;
    } else {
      acc = acc + V(c.to_complex()) * t;
    }
  }
  return acc;
}

inline Cplx poly_eval(const FloatPoly& p, const std::array<Cplx, 3>& lift) {
  return poly_eval_impl(p, lift);
}
inline Cplx poly_eval(const ExactPoly& p, const std::array<Cplx, 3>& lift) {
  return poly_eval_impl(p, lift);
}
inline GaussRational poly_eval_exact(const ExactPoly& p,
                                     const std::array<GaussRational, 3>& lift) {
  return poly_eval_impl(p, lift);
}

inline FloatPoly to_float(const ExactPoly& p) {
  FloatPoly r(p.nvars, p.degree);
  for (auto& [ex, c] : p.terms) r.add_term(ex, c.to_complex());
  return r;
}

}  // namespace greendyn
