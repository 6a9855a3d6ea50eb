#pragma once

// Manufactured solution, Taylor-Green vortex, Sod shock tube and the
// integral analysis quantities.

#include <array>
#include <vector>

#include "hexdg/dg_operator.hpp"

namespace hexdg {

/// rho = rho u = rho v = rho w = g, rho e = g^2 with
/// g = 2 + A sin(2 pi (x + y + z - a t)) on the periodic box [-1, 1]^3.
struct ManufacturedSolution {
  double amplitude = 0.1;
  double speed = 1.0;

  State5 exact(const Vec3& x, double t) const;
  /// Source for the Navier-Stokes equations with constant viscosity
  /// (gas.mu_ref = 0 gives the Euler source).
  void source(const Vec3& x, double t, const GasProperties& gas, double* S) const;
};

struct TGVSetup {
  double Ma0 = 0.1;
  double Re = 1600.0;
  double L = 1.0;
  double U0 = 1.0;
  double rho0 = 1.0;
  int version = 2;
  bool sutherland = false;
  bool viscous = true;

  double p0(double gamma) const { return rho0 * U0 * U0 / (gamma * Ma0 * Ma0); }
  double mu0() const { return rho0 * U0 * L / Re; }
  /// Gas with mu_ref = mu0 (or inviscid), T_ref = T0 for Sutherland.
  GasProperties gas(double gamma = 1.4, double R = 1.0, double Pr = 0.71) const;
  PrimitiveState state(const Vec3& x, const GasProperties& gas) const;
};

/// Nodal interpolation of a pointwise initial condition.
std::vector<double> project_initial(const Discretization& disc, const std::function<State5(const Vec3&)>& f);

std::vector<double> tgv_init(const Discretization& disc, const TGVSetup& setup);

struct SodSetup {
  double x0 = 0.5;
  PrimitiveState left{1.0, {0.0, 0.0, 0.0}, 1.0, 1.0};
  PrimitiveState right{0.125, {0.0, 0.0, 0.0}, 0.1, 0.8};
};

/// Left/right states by node position; a node exactly on x0 takes the state
/// of its element's side.
std::vector<double> sod_init(const Discretization& disc, const SodSetup& setup);
/// Dirichlet states on the x-boundaries (tags 1 and 2) holding the far-field data.
void sod_boundaries(SchemeConfig& scheme, const SodSetup& setup, const GasProperties& gas);

/// Per-element integrals used by the analysis, in element order:
/// volume, mass/momentum/energy totals (5), rho |u|^2, mu |omega|^2, mu (div u)^2.
inline constexpr int kNumPartials = 9;
void element_partials(const Discretization& disc, int global_elem, const double* U_elem, const double* grad_elem,
                      double* out);

struct AnalysisRecord {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double E_k = 0.0;
  double eps_S = 0.0;
  double eps_D = 0.0;
  std::array<double, 5> totals{};
  double max_alpha = 0.0;
};

struct AnalysisScales {
  double rho0 = 1.0;
  double U0 = 1.0;
  double L = 1.0;
};

/// Sums per-element partials (all elements, global order) sequentially.
AnalysisRecord reduce_partials(const std::vector<double>& partials, const AnalysisScales& scales);

/// Serial analysis of a global field; grad may be empty (no dissipation terms).
AnalysisRecord analyze(const Discretization& disc, const std::vector<double>& U, const std::vector<double>& grad,
                       const AnalysisScales& scales);

/// L2 norm of (rho_h - rho_exact) over the domain, evaluated with a Gauss rule
/// of N + 3 points per direction.
double l2_density_error(const Discretization& disc, const std::vector<double>& U,
                        const std::function<double(const Vec3&)>& rho_exact);

}  // namespace hexdg
