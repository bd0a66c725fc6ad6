#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "greendyn/gauss_rational.hpp"

namespace greendyn {

// Admission schedule, held in log form so doubly exponential decay never
// touches a double's range: log2_inv_h(n) = log2(1/h(n)) >= 0, non-decreasing.
struct Schedule {
  std::function<double(std::int64_t)> log2_inv_h;
  std::string name;
};

Schedule schedule_const(double h);   // h constant in (0,1)
Schedule schedule_doubleexp();       // h(n) = 2^{-2^{2n}}

struct LiouvilleTheta {
  // theta = 1/2 + delta with delta in (1/(2^E+1), 2^{-E}): one huge partial
  // quotient, golden tail, so delta is irrational with certified two-sided
  // bounds carried only through the exponent E.
  std::int64_t E = 0;
  std::vector<std::int64_t> witnesses;    // n_j, odd and increasing
  std::vector<double> log2_residue;       // certified upper bounds log2(2 n_j theta mod 1)
  std::vector<double> log2_h;             // log2 h(n_j) for comparison
  int precision_bits = 256;
  BigInt scaled_value;                    // floor(theta * 2^precision_bits)
};

// Builds theta with witnesses n_j = 2j-1 certifying 2 n_j theta mod 1 <
// h(n_j) for j = 1..J.  Odd witnesses put 2 n_j theta just past an odd
// integer, which is what makes the rotation distances on the invariant line
// collapse; the residue is then exactly 2 n_j delta.  J > 8 exceeds the
// int64 exponent budget for doubly exponential schedules.
LiouvilleTheta liouville_theta(const Schedule& h, int J, int precision_bits = 256);

// Certified natural-log distances |cos(pi n theta)| for n = 0..N: rotation
// point spacing on the invariant line.  Odd n collapse to sin(pi n delta)
// (bounded in log space through E); even n stay at distance 1 up to an error
// below any double.
std::vector<double> rotation_log_dists(const LiouvilleTheta& theta, int N);

}  // namespace greendyn
