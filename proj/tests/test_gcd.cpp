#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "greendyn/gcd.hpp"

using namespace greendyn;

namespace {

Exps ex(int a, int b, int c = 0) {
  Exps e;
  e.e = {a, b, c};
  return e;
}

ExactPoly mono(int nvars, int a, int b, int c = 0) {
  ExactPoly p(nvars, a + b + c);
  p.add_term(ex(a, b, c), GaussRational(Rational(1)));
  return p;
}

GaussRational gr(long n) { return GaussRational(Rational(n)); }

}  // namespace

TEST_CASE("monomial gcd") {
  // gcd(z0^2 z1, z0 z1^2) = z0 z1
  ExactPoly g = multi_gcd({mono(3, 2, 1), mono(3, 1, 2)});
  CHECK(g.degree == 2);
  CHECK(g.terms.size() == 1);
  CHECK(g.terms.at(ex(1, 1)) == gr(1));
}

TEST_CASE("shared linear factor across a family") {
  ExactPoly lin(3, 1);  // z0 + z1 + z2
  lin.add_term(ex(1, 0, 0), gr(1));
  lin.add_term(ex(0, 1, 0), gr(1));
  lin.add_term(ex(0, 0, 1), gr(1));
  ExactPoly quad(3, 2);  // z0^2 + z1 z2
  quad.add_term(ex(2, 0, 0), gr(1));
  quad.add_term(ex(0, 1, 1), gr(1));

  ExactPoly a = lin * quad;
  ExactPoly b = lin * mono(3, 0, 1, 1);
  ExactPoly g = multi_gcd({a, b});
  CHECK(g.degree == 1);
  CHECK(g.terms.size() == 3);
  CHECK(g.terms.at(ex(1, 0, 0)) == gr(1));  // normalized on the lex-leading term
  CHECK(g.terms.at(ex(0, 1, 0)) == gr(1));
  CHECK(g.terms.at(ex(0, 0, 1)) == gr(1));

  ExactPoly cof = exact_divide(a, g);
  CHECK(cof.degree == 2);
  CHECK(cof.terms.at(ex(2, 0, 0)) == gr(1));
  CHECK(cof.terms.at(ex(0, 1, 1)) == gr(1));
  CHECK_THROWS_AS(exact_divide(quad, lin), invalid_parameter);
}

TEST_CASE("shared irreducible quadric, full remainder-sequence path") {
  ExactPoly s(3, 2);  // z0^2 + z1^2 + z2^2
  s.add_term(ex(2, 0, 0), gr(1));
  s.add_term(ex(0, 2, 0), gr(1));
  s.add_term(ex(0, 0, 2), gr(1));
  ExactPoly la(3, 1), lb(3, 1);
  la.add_term(ex(1, 0, 0), gr(1));
  la.add_term(ex(0, 1, 0), gr(1));
  lb.add_term(ex(0, 1, 0), gr(1));
  lb.add_term(ex(0, 0, 1), gr(1));
  ExactPoly g = multi_gcd({s * la, s * lb});
  CHECK(g.degree == 2);
  CHECK(g.terms.size() == 3);
  CHECK(g.terms.at(ex(2, 0, 0)) == gr(1));
  CHECK(g.terms.at(ex(0, 2, 0)) == gr(1));
  CHECK(g.terms.at(ex(0, 0, 2)) == gr(1));
}

TEST_CASE("coprime families reduce to a constant") {
  // Components of the raw second iterate of [z0^2 : z1 z2 : z0 z1], whose only
  // common factor is the monomial z0.
  ExactPoly g = multi_gcd({mono(3, 4, 0, 0), mono(3, 1, 2, 1), mono(3, 2, 1, 1)});
  CHECK(g.degree == 1);
  CHECK(g.terms.at(ex(1, 0, 0)) == gr(1));

  ExactPoly q(3, 2);  // z1^2 + z0 z2, coprime to z0 z1
  q.add_term(ex(0, 2, 0), gr(1));
  q.add_term(ex(1, 0, 1), gr(1));
  ExactPoly c = multi_gcd({mono(3, 1, 1), q});
  CHECK(c.degree == 0);
}

TEST_CASE("coprimality certificate") {
  CHECK(certify_coprime(mono(3, 1, 0), mono(3, 0, 1)));
  CHECK_FALSE(certify_coprime(mono(3, 1, 1), mono(3, 1, 0, 1)));  // share z0

  ExactPoly a(2, 2), b(2, 2);  // z0^2 + z1^2 vs z0^2 - z1^2
  a.add_term(ex(2, 0), gr(1));
  a.add_term(ex(0, 2), gr(1));
  b.add_term(ex(2, 0), gr(1));
  b.add_term(ex(0, 2), gr(-1));
  CHECK(certify_coprime(a, b));

  ExactPoly lin(2, 1);  // z0 + z1 divides z0^2 - z1^2
  lin.add_term(ex(1, 0), gr(1));
  lin.add_term(ex(0, 1), gr(1));
  CHECK_FALSE(certify_coprime(b, lin));
}
