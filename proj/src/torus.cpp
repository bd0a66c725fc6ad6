#include "greendyn/torus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "greendyn/errors.hpp"

namespace greendyn {

namespace {

Rational mod1(const Rational& x) {
  BigInt n = numerator(x), d = denominator(x);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;  // floor division
  return x - Rational(q);
}

TorusPoint reduced(Rational a1, Rational b1, Rational a2, Rational b2) {
  return TorusPoint{mod1(std::move(a1)), mod1(std::move(b1)), mod1(std::move(a2)),
                    mod1(std::move(b2))};
}

void check_order(int zeta_order) {
  if (zeta_order != 3 && zeta_order != 4 && zeta_order != 6)
    throw invalid_parameter("torus: zeta order must be 3, 4 or 6");
}

std::complex<double> zeta_value(int order) {
  return std::polar(1.0, 2.0 * M_PI / order);
}

}  // namespace

bool operator==(const TorusPoint& x, const TorusPoint& y) {
  return x.a1 == y.a1 && x.b1 == y.b1 && x.a2 == y.a2 && x.b2 == y.b2;
}

bool operator<(const TorusPoint& x, const TorusPoint& y) {
  return std::tie(x.a1, x.b1, x.a2, x.b2) < std::tie(y.a1, y.b1, y.a2, y.b2);
}

std::vector<std::pair<Rational, Rational>> sigma_fixed_coords(int zeta_order) {
  check_order(zeta_order);
  // Fixed points solve (zeta - 1) z in Z[zeta]; |N(zeta - 1)| of them.
  // In basis coordinates z = a + b zeta with zeta^2 expressed over (1, zeta):
  // order 3: zeta^2 = -1 - zeta; order 4: zeta^2 = -1; order 6: zeta^2 = zeta - 1.
  // Brute force over a small denominator grid is simplest and exact.
  std::vector<std::pair<Rational, Rational>> out;
  int den = zeta_order == 4 ? 2 : 3;
  for (int i = 0; i < den; ++i) {
    for (int j = 0; j < den; ++j) {
      Rational a(i, den), b(j, den);
      // zeta * (a + b zeta) = a zeta + b zeta^2.
      Rational ra, rb;
      if (zeta_order == 3) {
        ra = -b;
        rb = a - b;
      } else if (zeta_order == 4) {
        ra = -b;
        rb = a;
      } else {
        ra = -b;
        rb = a + b;
      }
      if (mod1(ra - a) == 0 && mod1(rb - b) == 0) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<TorusPoint> torus_preimages(int d, int zeta_order, const TorusPoint& a, int depth) {
  if (d < 3) throw invalid_parameter("torus_preimages: d must be >= 3");
  check_order(zeta_order);
  if (depth < 0) throw invalid_parameter("torus_preimages: negative depth");
  if (depth > 3) throw resource_limit("torus_preimages: depth capped at 3");
  std::vector<TorusPoint> cur{reduced(a.a1, a.b1, a.a2, a.b2)};
  const Rational det(static_cast<long long>(d) * d - 1);
  auto pull_back = [&](const TorusPoint& p, int m1, int n1, int m2, int n2) {
    // Solve (d z1 + z2, z1 + d z2) = p + lambda for the integer translate
    // lambda = (m1 + n1 zeta, m2 + n2 zeta); the inverse matrix is
    // [[d,-1],[-1,d]]/(d^2-1), acting per basis coordinate.
    Rational a1 = p.a1 + m1, b1 = p.b1 + n1;
    Rational a2 = p.a2 + m2, b2 = p.b2 + n2;
    return reduced((d * a1 - a2) / det, (d * b1 - b2) / det, (d * a2 - a1) / det,
                   (d * b2 - b1) / det);
  };
  // Translates in the box [0, d^2-1)^4 cover every coset of the image lattice,
  // with heavy repetition; keep one representative per distinct coset by
  // collecting distinct preimages of the origin.
  std::vector<std::array<int, 4>> reps;
  {
    std::set<TorusPoint> seen;
    TorusPoint zero{};
    for (int m1 = 0; m1 < d * d - 1; ++m1)
      for (int n1 = 0; n1 < d * d - 1; ++n1)
        for (int m2 = 0; m2 < d * d - 1; ++m2)
          for (int n2 = 0; n2 < d * d - 1; ++n2)
            if (seen.insert(pull_back(zero, m1, n1, m2, n2)).second)
              reps.push_back({m1, n1, m2, n2});
  }
  for (int step = 0; step < depth; ++step) {
    std::set<TorusPoint> next;
    for (const auto& p : cur)
      for (const auto& r : reps) next.insert(pull_back(p, r[0], r[1], r[2], r[3]));
    cur.assign(next.begin(), next.end());
  }
  return cur;
}

TorusFill torus_grid_fill(const std::vector<TorusPoint>& pts, int res) {
  if (res < 1) throw invalid_parameter("torus_grid_fill: resolution must be positive");
  TorusFill f;
  f.points = static_cast<long long>(pts.size());
  f.cells_total = res * res;
  std::set<std::pair<int, int>> cells;
  for (const auto& p : pts) {
    // Exact cell index floor(res * coord) for coords in [0,1).
    Rational sx = p.a1 * res, sy = p.b1 * res;
    BigInt ix = numerator(sx) / denominator(sx);
    BigInt iy = numerator(sy) / denominator(sy);
    cells.emplace(ix.convert_to<int>(), iy.convert_to<int>());
  }
  f.cells_hit = static_cast<int>(cells.size());
  f.fraction = static_cast<double>(f.cells_hit) / f.cells_total;
  return f;
}

double torus_dist(const TorusPoint& x, const TorusPoint& y, int zeta_order) {
  check_order(zeta_order);
  std::complex<double> zeta = zeta_value(zeta_order);
  auto factor_dist2 = [&](Rational da, Rational db) {
    double a = mod1(da).convert_to<double>();
    double b = mod1(db).convert_to<double>();
    double best = 1e300;
    for (int s = -1; s <= 1; ++s)
      for (int t = -1; t <= 1; ++t) {
        std::complex<double> v = (a + s) + (b + t) * zeta;
        best = std::min(best, std::norm(v));
      }
    return best;
  };
  return std::sqrt(factor_dist2(x.a1 - y.a1, x.b1 - y.b1) +
                   factor_dist2(x.a2 - y.a2, x.b2 - y.b2));
}

}  // namespace greendyn
