#pragma once
#include <stdexcept>
#include <string>

namespace greendyn {

struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct backend_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct invalid_parameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Point where every component of a map vanishes (below tolerance in float mode).
struct indeterminate_point : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct orbit_hits_indeterminacy : std::runtime_error {
  int step;
  explicit orbit_hits_indeterminacy(int s)
      : std::runtime_error("orbit hits indeterminacy at step " + std::to_string(s)), step(s) {}
};

struct resource_limit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct positive_dimensional_locus : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct insufficient_spread : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct missing_calibration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct precision_budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace greendyn
