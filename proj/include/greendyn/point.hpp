#pragma once
#include <array>
#include <cmath>
#include <complex>

#include "greendyn/errors.hpp"
#include "greendyn/gauss_rational.hpp"

namespace greendyn {

using Cplx = std::complex<double>;

// Point of P^dim, dim in {1,2}.  Stored normalized: the coordinate of largest
// modulus (lowest index on ties) is divided out, so it equals exactly 1.
struct ProjectivePoint {
  int dim = 1;
  std::array<Cplx, 3> c{Cplx(0), Cplx(0), Cplx(0)};

  ProjectivePoint() = default;
  ProjectivePoint(Cplx a, Cplx b) : dim(1), c{a, b, Cplx(0)} { normalize(); }
  ProjectivePoint(Cplx a, Cplx b, Cplx d) : dim(2), c{a, b, d} { normalize(); }

  void normalize() {
    int best = 0;
    double m = -1;
    for (int i = 0; i <= dim; i++) {
      double a = std::abs(c[i]);
      if (a > m) {
        m = a;
        best = i;
      }
    }
    if (m == 0.0 || !std::isfinite(m)) throw invalid_parameter("invalid projective point");
    Cplx piv = c[best];
    for (int i = 0; i <= dim; i++) c[i] /= piv;
    c[best] = Cplx(1);
  }

  // Unit lift (euclidean norm 1).
  std::array<Cplx, 3> unit_lift() const {
    double n = 0;
    for (int i = 0; i <= dim; i++) n += std::norm(c[i]);
    n = std::sqrt(n);
    std::array<Cplx, 3> u{Cplx(0), Cplx(0), Cplx(0)};
    for (int i = 0; i <= dim; i++) u[i] = c[i] / n;
    return u;
  }
};

// Chordal distance sqrt(1 - |<x,y>|^2) on unit lifts, computed through the
// wedge product so nearby points do not lose precision to cancellation.
inline double chordal_dist(const ProjectivePoint& x, const ProjectivePoint& y) {
  if (x.dim != y.dim) throw dimension_mismatch("chordal_dist: dim mismatch");
  double nx = 0, ny = 0, w = 0;
  for (int i = 0; i <= x.dim; i++) {
    nx += std::norm(x.c[i]);
    ny += std::norm(y.c[i]);
  }
  for (int i = 0; i <= x.dim; i++)
    for (int j = i + 1; j <= x.dim; j++) w += std::norm(x.c[i] * y.c[j] - x.c[j] * y.c[i]);
  double d = std::sqrt(w / (nx * ny));
  return d > 1.0 ? 1.0 : d;
}

// Exact-coordinate point; normalized so the coordinate of largest modulus
// (exact comparison of |.|^2, lowest index on ties) equals exactly 1.
struct ExactPoint {
  int dim = 1;
  std::array<GaussRational, 3> c;

  ExactPoint() = default;
  ExactPoint(GaussRational a, GaussRational b)
      : dim(1), c{std::move(a), std::move(b), GaussRational{}} {
    normalize();
  }
  ExactPoint(GaussRational a, GaussRational b, GaussRational d)
      : dim(2), c{std::move(a), std::move(b), std::move(d)} {
    normalize();
  }

  void normalize() {
    int best = -1;
    Rational m{-1};
    for (int i = 0; i <= dim; i++) {
      Rational n = c[i].norm();
      if (n > m) {
        m = n;
        best = i;
      }
    }
    if (best < 0 || m == 0) throw invalid_parameter("invalid exact projective point");
    GaussRational piv = c[best];
    for (int i = 0; i <= dim; i++) c[i] /= piv;
    c[best] = GaussRational{1};
  }

  ProjectivePoint to_float() const {
    if (dim == 1) return ProjectivePoint(c[0].to_complex(), c[1].to_complex());
    return ProjectivePoint(c[0].to_complex(), c[1].to_complex(), c[2].to_complex());
  }

  friend bool operator==(const ExactPoint& a, const ExactPoint& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i <= a.dim; i++)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }
};

}  // namespace greendyn
