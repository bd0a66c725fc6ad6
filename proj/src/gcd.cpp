#include "greendyn/gcd.hpp"

#include <algorithm>

#include "greendyn/errors.hpp"

namespace greendyn {
namespace {

// Internal engine: sparse multivariate polynomial over Q(i), no homogeneity
// invariant (PRS intermediates keep it anyway, but nothing below relies on
// that).
struct MP {
  int nvars = 3;
  std::map<Exps, GaussRational> t;

  bool zero() const { return t.empty(); }
  bool constant() const { return t.empty() || (t.size() == 1 && t.begin()->first.total() == 0); }
};

MP mp_from(const ExactPoly& p) {
  MP r;
  r.nvars = p.nvars;
  for (auto& [e, c] : p.terms) r.t.emplace(e, c);
  return r;
}

ExactPoly mp_to_poly(const MP& m) {
  int deg = 0;
  for (auto& [e, c] : m.t) deg = std::max(deg, e.total());
  ExactPoly p(m.nvars, deg);
  for (auto& [e, c] : m.t) {
    if (e.total() != deg) throw invalid_parameter("gcd result not homogeneous");
    p.add_term(e, c);
  }
  return p;
}

void mp_insert(MP& r, const Exps& e, const GaussRational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = r.t.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) r.t.erase(it);
  }
}

MP mp_add(const MP& a, const MP& b) {
  MP r = a;
  for (auto& [e, c] : b.t) mp_insert(r, e, c);
  return r;
}

MP mp_scale(const MP& a, const GaussRational& s) {
  MP r;
  r.nvars = a.nvars;
  if (s.is_zero()) return r;
  for (auto& [e, c] : a.t) r.t.emplace(e, c * s);
  return r;
}

MP mp_mul(const MP& a, const MP& b) {
  MP r;
  r.nvars = a.nvars;
  for (auto& [ea, ca] : a.t)
    for (auto& [eb, cb] : b.t) {
      Exps e;
      for (int v = 0; v < 3; v++) e.e[v] = ea.e[v] + eb.e[v];
      mp_insert(r, e, ca * cb);
    }
  return r;
}

MP mp_mul_term(const MP& a, const Exps& me, const GaussRational& mc) {
  MP r;
  r.nvars = a.nvars;
  if (mc.is_zero()) return r;
  for (auto& [e, c] : a.t) {
    Exps ne;
    for (int v = 0; v < 3; v++) ne.e[v] = e.e[v] + me.e[v];
    r.t.emplace(ne, c * mc);
  }
  return r;
}

MP mp_sub(const MP& a, const MP& b) { return mp_add(a, mp_scale(b, GaussRational(-1L))); }

int mp_deg(const MP& a, int v) {
  int d = -1;
  for (auto& [e, c] : a.t) d = std::max(d, e.e[v]);
  return d;  // -1 for the zero polynomial
}

// Coefficient of z_v^k, as a polynomial with that variable cleared.
MP mp_coeff(const MP& a, int v, int k) {
  MP r;
  r.nvars = a.nvars;
  for (auto& [e, c] : a.t)
    if (e.e[v] == k) {
      Exps ne = e;
      ne.e[v] = 0;
      r.t.emplace(ne, c);
    }
  return r;
}

MP mp_lc(const MP& a, int v) { return mp_coeff(a, v, mp_deg(a, v)); }

MP mp_one(int nvars) {
  MP r;
  r.nvars = nvars;
  r.t.emplace(Exps{}, GaussRational(1L));
  return r;
}

// Divide by the lex-leading coefficient so equal gcds compare equal.
MP mp_normalize(const MP& a) {
  if (a.zero()) return a;
  const GaussRational& lead = a.t.rbegin()->second;
  return mp_scale(a, GaussRational(1L) / lead);
}

// Exact division; lex order is multiplicative so peeling lead terms works
// whenever den really divides num.
MP mp_exact_div(const MP& num, const MP& den) {
  if (den.zero()) throw invalid_parameter("division by zero polynomial");
  MP r = num, q;
  q.nvars = num.nvars;
  auto dlead = den.t.rbegin();
  while (!r.zero()) {
    auto rlead = r.t.rbegin();
    Exps qe;
    for (int v = 0; v < 3; v++) {
      qe.e[v] = rlead->first.e[v] - dlead->first.e[v];
      if (qe.e[v] < 0) throw invalid_parameter("inexact polynomial division");
    }
    GaussRational qc = rlead->second / dlead->second;
    q.t.emplace(qe, qc);
    r = mp_sub(r, mp_mul_term(den, qe, qc));
  }
  return q;
}

MP mp_pow(const MP& a, int e) {
  MP r = mp_one(a.nvars);
  for (int i = 0; i < e; i++) r = mp_mul(r, a);
  return r;
}

bool mp_univariate_in(const MP& a, int v) {
  for (auto& [e, c] : a.t)
    for (int w = 0; w < 3; w++)
      if (w != v && e.e[w] != 0) return false;
  return true;
}

// --- univariate layer (dense coefficient vectors over Q(i)) ---

using UPoly = std::vector<GaussRational>;  // coeff[k] of x^k, no trailing zeros

void up_trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly up_monic(UPoly p) {
  up_trim(p);
  if (p.empty()) return p;
  GaussRational inv = GaussRational(1L) / p.back();
  for (auto& c : p) c *= inv;
  return p;
}

UPoly up_rem(UPoly a, const UPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    GaussRational q = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); i++) a[off + i] -= q * b[i];
    a.pop_back();
    up_trim(a);
  }
  return a;
}

UPoly up_gcd(UPoly a, UPoly b) {
  up_trim(a);
  up_trim(b);
  while (!b.empty()) {
    UPoly r = up_rem(a, up_monic(b));
    a = std::move(b);
    b = std::move(r);
  }
  return up_monic(a);
}

UPoly mp_to_up(const MP& a, int v) {
  UPoly r(std::size_t(std::max(0, mp_deg(a, v)) + 1));
  for (auto& [e, c] : a.t) r[std::size_t(e.e[v])] = c;
  up_trim(r);
  return r;
}

MP up_to_mp(const UPoly& p, int v, int nvars) {
  MP r;
  r.nvars = nvars;
  for (std::size_t k = 0; k < p.size(); k++)
    if (!p[k].is_zero()) {
      Exps e;
      e.e[v] = int(k);
      r.t.emplace(e, p[k]);
    }
  return r;
}

// --- multivariate gcd proper ---

MP mp_gcd(const MP& a, const MP& b);

MP mp_content(const MP& a, int v) {
  MP c;
  c.nvars = a.nvars;
  for (int k = mp_deg(a, v); k >= 0; k--) {
    c = mp_gcd(c, mp_coeff(a, v, k));
    if (c.constant() && !c.zero()) return mp_one(a.nvars);
  }
  return c;
}

// Subresultant PRS on polynomials primitive in v; returns their gcd's
// primitive part wrt v.
MP mp_prem(const MP& a, const MP& b, int v) {
  int db = mp_deg(b, v);
  MP lb = mp_lc(b, v);
  MP r = a;
  int e = mp_deg(a, v) - db + 1;
  while (!r.zero() && mp_deg(r, v) >= db) {
    int dr = mp_deg(r, v);
    Exps shift;
    shift.e[v] = dr - db;
    MP sub = mp_mul(mp_mul_term(b, shift, GaussRational(1L)), mp_lc(r, v));
    r = mp_sub(mp_mul(r, lb), sub);
    e--;
  }
  if (e > 0) r = mp_mul(r, mp_pow(lb, e));
  return r;
}

MP mp_prs_gcd(MP a, MP b, int v) {
  if (mp_deg(a, v) < mp_deg(b, v)) std::swap(a, b);
  MP g = mp_one(a.nvars), h = mp_one(a.nvars);
  while (true) {
    int delta = mp_deg(a, v) - mp_deg(b, v);
    MP r = mp_prem(a, b, v);
    if (r.zero()) break;
    if (mp_deg(r, v) == 0) return mp_one(a.nvars);
    a = std::move(b);
    MP div = mp_mul(g, mp_pow(h, delta));
    b = mp_exact_div(r, div);
    g = mp_lc(a, v);
    h = delta == 0 ? h : mp_exact_div(mp_pow(g, delta), mp_pow(h, delta - 1));
  }
  return mp_normalize(mp_exact_div(b, mp_content(b, v)));
}

MP mp_gcd(const MP& a, const MP& b) {
  if (a.zero()) return mp_normalize(b);
  if (b.zero()) return mp_normalize(a);
  if (a.constant() || b.constant()) return mp_one(a.nvars);
  int v = -1;
  for (int w = 2; w >= 0; w--)
    if (mp_deg(a, w) > 0 || mp_deg(b, w) > 0) {
      v = w;
      break;
    }
  if (mp_deg(a, v) == 0) return mp_gcd(a, mp_content(b, v));
  if (mp_deg(b, v) == 0) return mp_gcd(mp_content(a, v), b);
  if (mp_univariate_in(a, v) && mp_univariate_in(b, v))
    return up_to_mp(up_gcd(mp_to_up(a, v), mp_to_up(b, v)), v, a.nvars);
  MP ca = mp_content(a, v), cb = mp_content(b, v);
  MP pa = mp_exact_div(a, ca), pb = mp_exact_div(b, cb);
  MP g = mp_prs_gcd(std::move(pa), std::move(pb), v);
  return mp_normalize(mp_mul(mp_gcd(ca, cb), g));
}

// Specialize (homogeneous) p with variable `one` set to 1, `par` set to t,
// leaving a univariate polynomial in `main`.
UPoly specialize(const ExactPoly& p, int main, int one, int par, const Rational& t) {
  UPoly r(std::size_t(p.degree + 1));
  for (auto& [e, c] : p.terms) {
    GaussRational tc = c;
    for (int k = 0; k < e.e[par]; k++) tc *= GaussRational(t);
    r[std::size_t(e.e[main])] += tc;
  }
  up_trim(r);
  return r;
}

bool shares_variable_factor(const ExactPoly& a, const ExactPoly& b) {
  for (int v = 0; v < a.nvars; v++) {
    auto min_e = [v](const ExactPoly& p) {
      int m = p.degree + 1;
      for (auto& [e, c] : p.terms) m = std::min(m, e.e[v]);
      return m;
    };
    if (min_e(a) > 0 && min_e(b) > 0) return true;
  }
  return false;
}

}  // namespace

bool certify_coprime(const ExactPoly& a, const ExactPoly& b) {
  if (a.is_zero() || b.is_zero()) return false;
  if (a.degree == 0 || b.degree == 0) return true;
  if (shares_variable_factor(a, b)) return false;
  if (a.nvars == 2) {
    // Binary forms: common factor iff both divisible by z0 (checked above) or
    // the dehomogenizations at z0=1 share a root.  This case is exact.
    UPoly ua = specialize(a, 1, 0, 2, Rational(0));
    UPoly ub = specialize(b, 1, 0, 2, Rational(0));
    return up_gcd(ua, ub).size() == 1;
  }
  // Three variables: first force the gcd out of z2, then out of z1.  If a
  // common factor g had positive degree in the main variable, its leading
  // coefficient (degree <= D binary form in the other two variables, nonzero
  // somewhere among D+1 distinct parameter values) would make the specialized
  // gcd nonconstant at that parameter.  Degenerate specializations abort the
  // certificate instead of being skipped.
  int D = std::max(a.degree, b.degree);
  for (auto [main, par] : {std::pair{2, 1}, std::pair{1, 2}}) {
    for (int j = 0; j <= D; j++) {
      Rational t(j + 1);  // nonzero values dodge the commonest degeneracies
      UPoly ua = specialize(a, main, 0, par, t);
      UPoly ub = specialize(b, main, 0, par, t);
      if (ua.empty() || ub.empty()) return false;
      if (up_gcd(ua, ub).size() != 1) return false;
    }
  }
  return true;
}

ExactPoly multi_gcd(const std::vector<ExactPoly>& polys) {
  MP g;
  int nvars = 0;
  for (auto& p : polys) {
    if (nvars == 0) nvars = p.nvars;
    if (p.nvars != nvars) throw dimension_mismatch("multi_gcd: mixed variable counts");
    if (p.is_zero()) continue;
    g = mp_gcd(g, mp_from(p));  // zero seed: first fold just normalizes p
    if (g.constant() && !g.zero()) break;
  }
  if (g.zero()) throw invalid_parameter("multi_gcd of all-zero family");
  return mp_to_poly(mp_normalize(g));
}

ExactPoly exact_divide(const ExactPoly& num, const ExactPoly& den) {
  return mp_to_poly(mp_exact_div(mp_from(num), mp_from(den)));
}

}  // namespace greendyn
