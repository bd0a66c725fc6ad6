#pragma once
#include <vector>

#include "greendyn/gauss_rational.hpp"

namespace greendyn {

// Point of (C/Z[zeta])^2 in coordinates over the basis (1, zeta) of the
// lattice, each entry an exact rational reduced into [0,1).  zeta is a fixed
// primitive root of unity of order 3, 4 or 6; its actual value only enters
// through euclidean distances, never through the lattice arithmetic.
struct TorusPoint {
  Rational a1, b1, a2, b2;  // z1 = a1 + b1 zeta, z2 = a2 + b2 zeta
};

bool operator==(const TorusPoint& x, const TorusPoint& y);
bool operator<(const TorusPoint& x, const TorusPoint& y);

// Fixed points of multiplication by zeta on one factor, as basis coordinates:
// solutions of (zeta - 1) z in Z[zeta].  Order 4 gives two per factor, order
// 3 gives three, order 6 only zero.
std::vector<std::pair<Rational, Rational>> sigma_fixed_coords(int zeta_order);

// Depth-fold preimages of a under the endomorphism (z1,z2) -> (d z1 + z2,
// z1 + d z2): solve iteratively over lattice coset representatives
// enumerated by brute force in a bounding box, deduplicating modulo the
// lattice.  Exact rational arithmetic throughout, so cardinalities are exact:
// ((d^2-1)^2)^depth.  depth > 3 exceeds the enumeration budget.
std::vector<TorusPoint> torus_preimages(int d, int zeta_order, const TorusPoint& a, int depth);

struct TorusFill {
  long long points = 0;
  int cells_hit = 0;       // distinct cells of the res x res partition hit by
                           // first-factor basis coordinates
  int cells_total = 0;
  double fraction = 0;
};

// Occupancy of the res x res partition of one factor's fundamental domain
// (basis coordinates), counting the first-factor projection of the point set.
TorusFill torus_grid_fill(const std::vector<TorusPoint>& pts, int res);

// Euclidean distance on the torus: minimum over the 9 nearest lattice
// translates per factor, with zeta realized as the actual root of unity.
double torus_dist(const TorusPoint& x, const TorusPoint& y, int zeta_order);

}  // namespace greendyn
