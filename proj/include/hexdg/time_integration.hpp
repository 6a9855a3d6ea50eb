#pragma once

// Two-register low-storage explicit Runge-Kutta schemes and the CFL timestep.

#include <functional>
#include <string>
#include <vector>

#include "hexdg/dg_operator.hpp"

namespace hexdg {

struct RKScheme {
  std::string name;
  int stages = 0;
  int order = 0;
  std::vector<double> A, B, c;
};

/// "carpenter-kennedy-5-4" or "niegemann-14-4"; throws ConfigError otherwise.
const RKScheme& rk_scheme(const std::string& name);
std::vector<std::string> rk_scheme_names();

using RhsFn = std::function<void(const std::vector<double>& U, double t, std::vector<double>& Ut)>;

/// One step: K = A_i K + dt L(U, t + c_i dt), U += B_i K. K and Ut are
/// scratch registers. Errors from the rhs are rethrown with the stage index.
void rk_step(std::vector<double>& U, std::vector<double>& K, std::vector<double>& Ut, double t, double dt,
             const RhsFn& rhs, const RKScheme& scheme);

struct TimestepConfig {
  double cfl = 0.9;
  double cfl_visc = 0.4;
};

/// Minimum admissible dt over elements [e0, e1) of the global field U (local
/// element index e maps to global element elem_begin + e).
double compute_dt(const Discretization& disc, const double* U, int elem_begin, int n_elems,
                  const TimestepConfig& cfg);

}  // namespace hexdg
