#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greendyn/map.hpp"

namespace greendyn {

// A named map together with whatever side data is known in closed form:
// inverse, exact-coefficient model, dynamical degree, indeterminacy sets.
// Every closed-form claim is re-verified numerically while building; a
// failure throws invalid_parameter rather than returning a bad scenario.
struct Scenario {
  std::string name;
  std::string params;  // canonical echo of the parameters used
  FloatMap map;
  std::optional<FloatMap> inverse;
  std::optional<ExactMap> exact_map;
  std::optional<ExactMap> exact_inverse;
  double lambda = 0;  // dynamical degree (= algebraic degree when 1-stable)
  std::vector<ProjectivePoint> known_indet;
  std::vector<ProjectivePoint> known_inverse_indet;
};

// z -> z^2 + c on P^1, homogenized [z0^2 : z1^2 + c z0^2] with z = z1/z0.
Scenario build_quadratic(Cplx c);

// [z0^2 : z1 z2 : z0 z1] on P^2: degree drops at the second iterate, the
// standard non-1-stable example.
Scenario build_example21();

// Skew product (z1, z2) -> (P(z1), Q(z1) + R(z2)) homogenized to degree
// deg R = (deg P)(deg Q); coefficient lists are lowest-degree-first.
// The line at infinity contracts to a superattracting fixed point and the
// single indeterminacy point sits at [0:1:0].
Scenario build_weakly_regular(const std::vector<Cplx>& P, const std::vector<Cplx>& Q,
                              const std::vector<Cplx>& R);

// Quadratic birational family
//   [x:y:z] -> [bcx(-cx+acy+z) : acy(x-ay+abz) : abz(bcx+y-bz)]
// with inverse given by the parameter swap (a,b,c) -> (1/a, 1/b, 1/c).
// Each coordinate line is invariant and carries a linear map.
Scenario build_fabc(Cplx a, Cplx b, Cplx c);
Scenario build_fabc_exact(const GaussRational& a, const GaussRational& b, const GaussRational& c);

// The rotation instance a = i, b = -s e^{2 pi i theta}, c = i/s: the invariant
// line {z=0} carries the rigid rotation x -> e^{2 pi i theta} x.
Scenario build_fabc_rotation(double s, double theta);

// Action of the coordinate line maps: which = 0,1,2 selects {x=0}, {y=0},
// {z=0}; w is the moving affine coordinate on that line ([0:w:1], [1:0:w],
// [w:1:0] respectively).
Cplx fabc_line_map(int which, Cplx a, Cplx b, Cplx c, Cplx w);

// Closed-form reference potentials for the two quadratic parameters with
// elementary formulas: c=0 gives log+ |z|; c=-2 conjugates to the squaring
// map via z = w + 1/w.
double oracle_green(Cplx c, Cplx z);

// Registry entry point used by the command line: name in {QUADRATIC,
// EXAMPLE21, WEAKLY_REGULAR, FABC, FABC_THM61}, params as key=value pairs
// (complex values as "re" or "re+imi").  TORUS is reserved for the lattice
// workflow and is rejected here with a pointer to the right subcommand.
Scenario build_scenario(const std::string& name, const std::map<std::string, std::string>& params);

Cplx parse_complex(const std::string& s);

// "k=v,k=v" -> map (spaces trimmed); empty string -> empty map.
std::map<std::string, std::string> parse_params(const std::string& s);

}  // namespace greendyn
