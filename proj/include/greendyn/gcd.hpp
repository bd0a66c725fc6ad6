#pragma once
#include <vector>

#include "greendyn/poly.hpp"

namespace greendyn {

// Exact GCD of a family of homogeneous polynomials over Q(i).  Result is
// monic in the sense that its lexicographically largest term has coefficient 1.
ExactPoly multi_gcd(const std::vector<ExactPoly>& polys);

// Cheap sufficient test that gcd(a, b) is constant: specialize one variable at
// enough rational values and take univariate gcds.  A false return is
// inconclusive, not a coprimality verdict.
bool certify_coprime(const ExactPoly& a, const ExactPoly& b);

// Exact division, throws invalid_parameter if the division is not exact.
ExactPoly exact_divide(const ExactPoly& num, const ExactPoly& den);

}  // namespace greendyn
