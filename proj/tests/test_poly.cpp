#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "greendyn/point.hpp"
#include "greendyn/poly.hpp"

using namespace greendyn;

namespace {

Exps ex(int a, int b, int c = 0) {
  Exps e;
  e.e = {a, b, c};
  return e;
}

}  // namespace

TEST_CASE("gauss rational arithmetic") {
  GaussRational i(Rational(0), Rational(1));
  GaussRational a(Rational(1), Rational(2));   // 1+2i
  GaussRational b(Rational(3), Rational(-1));  // 3-i
  GaussRational q = a / b;
  CHECK(q.re == Rational(1, 10));
  CHECK(q.im == Rational(7, 10));
  CHECK((q * b == a));
  CHECK(gr_pow(GaussRational(Rational(1), Rational(1)), 4) == GaussRational(Rational(-4)));
  CHECK(i * i == GaussRational(Rational(-1)));
  CHECK(a.norm() == Rational(5));
}

TEST_CASE("homogeneous poly term bookkeeping") {
  FloatPoly p(2, 2);
  p.add_term(ex(2, 0), Cplx(1));
  p.add_term(ex(0, 2), Cplx(2));
  p.add_term(ex(2, 0), Cplx(-1));  // cancels the first term
  CHECK(p.terms.size() == 1);
  CHECK(p.l1_norm() == doctest::Approx(2.0));
  CHECK_THROWS_AS(p.add_term(ex(1, 0), Cplx(1)), invalid_parameter);
  CHECK_THROWS_AS(p.add_term(ex(0, 0, 2), Cplx(1)), invalid_parameter);  // var outside nvars
}

TEST_CASE("poly product and derivative") {
  FloatPoly a(2, 1), b(2, 1);
  a.add_term(ex(1, 0), Cplx(1));
  a.add_term(ex(0, 1), Cplx(1));
  b.add_term(ex(1, 0), Cplx(1));
  b.add_term(ex(0, 1), Cplx(-1));
  FloatPoly p = a * b;  // z0^2 - z1^2
  CHECK(p.degree == 2);
  CHECK(p.terms.size() == 2);
  CHECK(p.terms.at(ex(2, 0)) == Cplx(1));
  CHECK(p.terms.at(ex(0, 2)) == Cplx(-1));

  FloatPoly q(2, 3);
  q.add_term(ex(2, 1), Cplx(1));
  FloatPoly dq = q.derivative(0);
  CHECK(dq.degree == 2);
  CHECK(dq.terms.at(ex(1, 1)) == Cplx(2));
  CHECK(q.derivative(2).is_zero());
}

TEST_CASE("poly evaluation, float and exact") {
  FloatPoly p(2, 2);
  p.add_term(ex(2, 0), Cplx(1));
  p.add_term(ex(0, 2), Cplx(2));
  CHECK(poly_eval(p, {Cplx(1), Cplx(2), Cplx(0)}) == Cplx(9));

  ExactPoly q(2, 2);
  q.add_term(ex(1, 1), GaussRational(Rational(0), Rational(1)));  // i*z0*z1
  GaussRational v =
      poly_eval_exact(q, {GaussRational(Rational(2)), GaussRational(Rational(3), Rational(1)),
                          GaussRational{}});
  CHECK(v == GaussRational(Rational(-2), Rational(6)));
  CHECK(poly_eval(to_float(q), {Cplx(2), Cplx(3, 1), Cplx(0)}) == Cplx(-2, 6));
}

TEST_CASE("projective point normalization") {
  ProjectivePoint x(Cplx(0, 4), Cplx(2));
  CHECK(x.c[0] == Cplx(1));  // largest modulus coordinate becomes the pivot
  CHECK(x.c[1] == Cplx(0, -0.5));
  CHECK_THROWS_AS(ProjectivePoint(Cplx(0), Cplx(0)), invalid_parameter);

  ExactPoint e(GaussRational(Rational(2)), GaussRational(Rational(4)),
               GaussRational(Rational(0), Rational(4)));
  CHECK(e.c[1] == GaussRational(Rational(1)));  // |4| ties |4i|, lowest index wins
  CHECK(e.c[0] == GaussRational(Rational(1, 2)));
  CHECK(e.c[2] == GaussRational(Rational(0), Rational(1)));
}

TEST_CASE("chordal distance") {
  ProjectivePoint a(Cplx(0), Cplx(1)), b(Cplx(1), Cplx(1));
  CHECK(chordal_dist(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(chordal_dist(a, a) == 0.0);
  CHECK(chordal_dist(a, b) == chordal_dist(b, a));

  // Wedge form stays accurate for nearby points where naive min-over-lifts
  // subtraction would lose everything to cancellation.
  double eps = 1e-9;
  ProjectivePoint c(Cplx(1), Cplx(1)), d(Cplx(1 + eps), Cplx(1));
  CHECK(chordal_dist(c, d) == doctest::Approx(eps / 2).epsilon(1e-6));

  ProjectivePoint p(Cplx(1), Cplx(2), Cplx(3)), q(Cplx(1), Cplx(2), Cplx(3.5));
  CHECK(chordal_dist(p, q) > 0);
  CHECK(chordal_dist(p, q) <= 1.0);
}
