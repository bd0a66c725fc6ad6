#include "greendyn/liouville.hpp"

#include <cmath>

#include "greendyn/errors.hpp"

namespace greendyn {

Schedule schedule_const(double h) {
  if (!(h > 0 && h < 1)) throw invalid_parameter("schedule_const: h must lie in (0,1)");
  Schedule s;
  double L = std::log2(1.0 / h);
  s.log2_inv_h = [L](std::int64_t) { return L; };
  s.name = "const";
  return s;
}

Schedule schedule_doubleexp() {
  Schedule s;
  // h(n) = 2^{-2^{2n}}: log2(1/h) = 2^{2n}, overflowing double past n = 500.
  s.log2_inv_h = [](std::int64_t n) {
    if (n > 500) throw precision_budget_exceeded("schedule_doubleexp: witness index too large");
    return std::ldexp(1.0, static_cast<int>(2 * n));
  };
  s.name = "doubleexp";
  return s;
}

LiouvilleTheta liouville_theta(const Schedule& h, int J, int precision_bits) {
  if (J < 1) throw invalid_parameter("liouville_theta: J must be >= 1");
  if (J > 8) throw precision_budget_exceeded("liouville_theta: J > 8 exceeds the exponent budget");
  if (precision_bits < 32 || precision_bits > 8192)
    throw invalid_parameter("liouville_theta: precision_bits out of range");
  if (!h.log2_inv_h) throw invalid_parameter("liouville_theta: empty schedule");

  LiouvilleTheta t;
  t.precision_bits = precision_bits;
  double Emax = 0;
  double prevL = -1;
  for (int j = 1; j <= J; ++j) {
    std::int64_t n = 2 * j - 1;
    double L = h.log2_inv_h(n);
    if (L < 0) throw invalid_parameter("liouville_theta: schedule has h > 1");
    if (L < prevL) throw invalid_parameter("liouville_theta: schedule must be non-increasing");
    prevL = L;
    t.witnesses.push_back(n);
    t.log2_h.push_back(-L);
    // Need 2 n delta < h(n) with delta < 2^{-E}: E > 1 + log2 n + log2(1/h).
    Emax = std::max(Emax, std::ceil(1.0 + std::log2(static_cast<double>(n)) + L));
    // Precision rule: at least twice log2(1/h) at the last witness.
    Emax = std::max(Emax, std::ceil(2.0 * L));
  }
  if (Emax > 9.0e18) throw precision_budget_exceeded("liouville_theta: exponent exceeds int64");
  t.E = std::max<std::int64_t>(static_cast<std::int64_t>(Emax), 8);
  for (std::size_t j = 0; j < t.witnesses.size(); ++j) {
    // Residue 2 n delta with delta < 2^{-E}: certified upper bound in log2.
    t.log2_residue.push_back(1.0 + std::log2(static_cast<double>(t.witnesses[j])) -
                             static_cast<double>(t.E));
  }

  // Display-grid value of theta = 1/2 + delta, delta = 1/(2^E + 1/phi) with
  // 1/phi = (sqrt(5)-1)/2, i.e. delta = 2 / (2^{E+1} - 1 + sqrt(5)).
  BigInt half = BigInt(1) << (precision_bits - 1);
  if (t.E > precision_bits + 64) {
    // delta * 2^P < 2^{P-E} < 1 contributes nothing to the grid value.
    t.scaled_value = half;
  } else {
    int guard = 64;
    int shift = precision_bits + guard;
    BigInt sqrt5 = sqrt(BigInt(5) << (2 * shift));  // floor(sqrt(5) * 2^shift)
    BigInt denom = (BigInt(1) << (t.E + 1 + shift)) - (BigInt(1) << shift) + sqrt5;
    BigInt delta_scaled = (BigInt(1) << (precision_bits + 1 + shift)) / denom;
    t.scaled_value = half + delta_scaled;
  }
  return t;
}

std::vector<double> rotation_log_dists(const LiouvilleTheta& t, int N) {
  if (N < 0) throw invalid_parameter("rotation_log_dists: negative length");
  std::vector<double> out;
  out.reserve(N + 1);
  const double ln2 = std::log(2.0);
  for (int n = 0; n <= N; ++n) {
    if (n % 2 == 0) {
      // |cos(pi n theta)| = |cos(pi n delta)| >= cos(pi n 2^{-E}): within any
      // double of 1 for the huge exponents this type carries.
      out.push_back(0.0);
    } else {
      // |cos(pi n theta)| = sin(pi n delta) < pi n 2^{-E}.
      double log2_dist = std::log2(M_PI * n) - static_cast<double>(t.E);
      out.push_back(std::min(0.0, log2_dist * ln2));
    }
  }
  return out;
}

}  // namespace greendyn
