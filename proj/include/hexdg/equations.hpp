#pragma once

// Compressible Navier-Stokes physics: state conversions, material laws,
// physical fluxes, interface (Riemann) fluxes and two-point volume fluxes.

#include <array>
#include <stdexcept>
#include <string>

namespace hexdg {

using Vec3 = std::array<double, 3>;
using State5 = std::array<double, 5>;

inline constexpr int kNumVars = 5;
/// Primitive storage per node: rho, u, v, w, p, T.
inline constexpr int kNumPrim = 6;
/// Lifted variables (u, v, w, T): exactly what the stress tensor and heat flux need.
inline constexpr int kNumLifted = 4;

enum class ViscosityLaw { constant, sutherland };

struct GasProperties {
  double gamma = 1.4;
  double R = 1.0;
  double Pr = 0.71;
  double mu_ref = 0.0;
  double T_ref = 1.0;
  ViscosityLaw viscosity_law = ViscosityLaw::constant;

  /// Throws std::invalid_argument if gamma <= 1, Pr <= 0 or mu_ref < 0.
  void validate() const;
  bool viscous() const { return mu_ref > 0.0; }
};

struct ConservedState {
  double rho = 1.0;
  Vec3 mom{0.0, 0.0, 0.0};
  double rhoE = 2.5;

  State5 as_array() const { return {rho, mom[0], mom[1], mom[2], rhoE}; }
  static ConservedState from_array(const State5& u) { return {u[0], {u[1], u[2], u[3]}, u[4]}; }
};

struct PrimitiveState {
  double rho = 1.0;
  Vec3 vel{0.0, 0.0, 0.0};
  double p = 1.0;
  double T = 1.0;
};

/// Gradient of the lifted variables: g[d][l] = d(u, v, w, T)_l / dx_d.
using LiftedGradient = std::array<std::array<double, kNumLifted>, 3>;

/// One physical flux per Cartesian direction: dir[d][var].
struct FluxTriple {
  std::array<State5, 3> dir{};
};

/// Raised when a state has non-positive (or non-finite) density or pressure.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RiemannSolverKind { llf, hllc };

PrimitiveState cons_to_prim(const ConservedState& U, const GasProperties& gas);
ConservedState prim_to_cons(const PrimitiveState& P, const GasProperties& gas);

/// Dynamic viscosity; Sutherland's law in the normalized form with the
/// constant 0.4042 = S/T_ref.
double viscosity(double T, const GasProperties& gas);
double thermal_conductivity(double mu, const GasProperties& gas);

FluxTriple euler_flux(const PrimitiveState& P, const ConservedState& U);

/// Diffusive flux blocks (0, -tau, -tau.u + q). The total flux is
/// euler_flux + viscous_flux.
FluxTriple viscous_flux(const PrimitiveState& P, const LiftedGradient& grad, const GasProperties& gas);

/// Viscous stress tensor tau[a][b].
std::array<Vec3, 3> stress_tensor(double mu, const LiftedGradient& grad);

/// Common flux f*(UL, UR, n) for a unit normal n.
State5 riemann_flux(const PrimitiveState& PL, const PrimitiveState& PR, const Vec3& n,
                    const GasProperties& gas, RiemannSolverKind kind = RiemannSolverKind::llf);

/// Kinetic-energy-preserving two-point flux contracted with an (already
/// averaged) metric vector. Symmetric in (PL, PR); equals the contravariant
/// Euler flux when PL == PR.
State5 split_flux_twopoint(const PrimitiveState& PL, const PrimitiveState& PR, const Vec3& metric,
                           const GasProperties& gas);

/// BR1 central trace of the lifted variables (u, v, w, T).
std::array<double, kNumLifted> br1_lifting_flux(const PrimitiveState& PL, const PrimitiveState& PR);

std::string describe_state(const ConservedState& U);

}  // namespace hexdg
