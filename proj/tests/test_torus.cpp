#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <doctest.h>

#include "greendyn/errors.hpp"
#include "greendyn/torus.hpp"

using namespace greendyn;

namespace {

TorusPoint origin() { return TorusPoint{}; }

// forward endomorphism (z1, z2) -> (d z1 + z2, z1 + d z2) on basis coords
TorusPoint forward(int d, const TorusPoint& p) {
  auto wrap = [](const Rational& x) {
    BigInt n = numerator(x), den = denominator(x);
    BigInt q = n / den;
    if (n < 0 && q * den != n) q -= 1;
    return x - Rational(q);
  };
  return TorusPoint{wrap(d * p.a1 + p.a2), wrap(d * p.b1 + p.b2), wrap(p.a1 + d * p.a2),
                    wrap(p.b1 + d * p.b2)};
}

}  // namespace

TEST_CASE("preimage counts are exact powers of the lattice index") {
  TorusPoint a = origin();
  auto d0 = torus_preimages(3, 4, a, 0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0] == a);

  auto d1 = torus_preimages(3, 4, a, 1);
  CHECK(d1.size() == 64);  // (d^2-1)^2 = 64 sheets
  // every preimage maps forward onto the source, exactly
  for (const auto& p : d1) CHECK(forward(3, p) == a);

  auto d2 = torus_preimages(3, 4, a, 2);
  CHECK(d2.size() == 4096);

  // translating the source translates the fiber: same count elsewhere
  TorusPoint b{Rational(1, 2), Rational(0), Rational(0), Rational(0)};
  CHECK(torus_preimages(3, 4, b, 1).size() == 64);

  // the lattice arithmetic is independent of which root of unity is chosen
  CHECK(torus_preimages(3, 3, a, 1).size() == 64);
  CHECK(torus_preimages(3, 6, a, 1).size() == 64);
  CHECK(torus_preimages(4, 4, a, 1).size() == 225);
}

TEST_CASE("depth-two preimages fill under half of the 50x50 grid") {
  auto d2 = torus_preimages(3, 4, origin(), 2);
  REQUIRE(d2.size() == 4096);
  TorusFill f = torus_grid_fill(d2, 50);
  CHECK(f.points == 4096);
  CHECK(f.cells_total == 2500);
  // first-factor coords all have denominator 64: floor collisions leave
  // exactly a 32x32 set of distinct cells
  CHECK(f.cells_hit == 1024);
  CHECK(std::abs(f.fraction - 0.4096) < 1e-15);
}

TEST_CASE("depth-three preimages cover every cell") {
  auto d3 = torus_preimages(3, 4, origin(), 3);
  REQUIRE(d3.size() == 262144);
  TorusFill f = torus_grid_fill(d3, 50);
  CHECK(f.cells_hit == 2500);
  CHECK(f.fraction == 1.0);
}

TEST_CASE("multiplication by zeta fixes the lattice torsion points") {
  auto o4 = sigma_fixed_coords(4);
  REQUIRE(o4.size() == 2);  // |N(i - 1)| = 2
  auto has = [](const std::vector<std::pair<Rational, Rational>>& v, const Rational& a,
                const Rational& b) {
    for (const auto& p : v)
      if (p.first == a && p.second == b) return true;
    return false;
  };
  CHECK(has(o4, Rational(0), Rational(0)));
  CHECK(has(o4, Rational(1, 2), Rational(1, 2)));
  // defining congruence for order 4: zeta (a + b zeta) = -b + a zeta = (a, b) mod lattice
  for (const auto& [a, b] : o4) {
    Rational da = -b - a, db = a - b;
    CHECK(denominator(Rational(numerator(da), 1) - da) == 1);
    CHECK(denominator(Rational(numerator(db), 1) - db) == 1);
  }

  auto o3 = sigma_fixed_coords(3);
  REQUIRE(o3.size() == 3);  // |N(zeta_3 - 1)| = 3
  CHECK(has(o3, Rational(0), Rational(0)));
  CHECK(has(o3, Rational(2, 3), Rational(1, 3)));
  CHECK(has(o3, Rational(1, 3), Rational(2, 3)));

  auto o6 = sigma_fixed_coords(6);
  REQUIRE(o6.size() == 1);  // zeta_6 - 1 is a unit
  CHECK(has(o6, Rational(0), Rational(0)));
}

TEST_CASE("torus distance respects wraparound and the embedding") {
  TorusPoint x{Rational(9, 10), Rational(0), Rational(0), Rational(0)};
  TorusPoint y{Rational(1, 10), Rational(0), Rational(0), Rational(0)};
  CHECK(std::abs(torus_dist(x, y, 4) - 0.2) < 1e-15);
  CHECK(std::abs(torus_dist(x, y, 3) - 0.2) < 1e-15);
  CHECK(std::abs(torus_dist(x, y, 4) - torus_dist(y, x, 4)) < 1e-15);
  CHECK(torus_dist(x, x, 4) == 0.0);

  // (1/2, 1/2) against the origin: square lattice gives sqrt(1/2), the
  // hexagonal one pulls it down to 1/2 via the translate -1
  TorusPoint h{Rational(1, 2), Rational(1, 2), Rational(0), Rational(0)};
  CHECK(std::abs(torus_dist(origin(), h, 4) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(torus_dist(origin(), h, 6) - 0.5) < 1e-15);

  // both factors contribute in quadrature
  TorusPoint q{Rational(1, 2), Rational(0), Rational(1, 2), Rational(0)};
  CHECK(std::abs(torus_dist(origin(), q, 4) - std::sqrt(0.5)) < 1e-15);
}

TEST_CASE("coordinates reduce into the unit box") {
  TorusPoint raw{Rational(-1, 4), Rational(7, 3), Rational(0), Rational(0)};
  auto d0 = torus_preimages(3, 4, raw, 0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0].a1 == Rational(3, 4));
  CHECK(d0[0].b1 == Rational(1, 3));
  CHECK(d0[0].a2 == Rational(0));
}

TEST_CASE("parameter validation") {
  TorusPoint a = origin();
  CHECK_THROWS_AS(torus_preimages(2, 4, a, 1), invalid_parameter);
  CHECK_THROWS_AS(torus_preimages(3, 5, a, 1), invalid_parameter);
  CHECK_THROWS_AS(torus_preimages(3, 4, a, -1), invalid_parameter);
  CHECK_THROWS_AS(torus_preimages(3, 4, a, 4), resource_limit);
  CHECK_THROWS_AS(torus_grid_fill({a}, 0), invalid_parameter);
  CHECK_THROWS_AS(torus_dist(a, a, 5), invalid_parameter);
  CHECK_THROWS_AS(sigma_fixed_coords(12), invalid_parameter);
}
