#include "hexdg/equations.hpp"

#include <cmath>
#include <cstdio>

#include "hexdg/detail/pointwise.hpp"

namespace hexdg {

namespace {

std::array<double, kNumPrim> to_array(const PrimitiveState& P) {
  return {P.rho, P.vel[0], P.vel[1], P.vel[2], P.p, P.T};
}

void check_admissible(const PrimitiveState& P, const char* where) {
  if (!(P.rho > 0.0) || !(P.p > 0.0) || !std::isfinite(P.rho) || !std::isfinite(P.p)) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: inadmissible state rho=%.17g u=(%.6g, %.6g, %.6g) p=%.17g", where, P.rho,
                  P.vel[0], P.vel[1], P.vel[2], P.p);
    throw AdmissibilityError(buf);
  }
}

}  // namespace

void GasProperties::validate() const {
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must be > 1");
  if (!(Pr > 0.0)) throw std::invalid_argument("Pr must be > 0");
  if (!(mu_ref >= 0.0)) throw std::invalid_argument("mu_ref must be >= 0");
  if (!(R > 0.0)) throw std::invalid_argument("R must be > 0");
  if (!(T_ref > 0.0)) throw std::invalid_argument("T_ref must be > 0");
}

PrimitiveState cons_to_prim(const ConservedState& U, const GasProperties& gas) {
  if (!(U.rho > 0.0) || !std::isfinite(U.rho)) {
    throw AdmissibilityError("cons_to_prim: non-positive density in " + describe_state(U));
  }
  const detail::GasConstants gc(gas);
  const State5 u = U.as_array();
  double prim[kNumPrim];
  detail::cons_to_prim_point(u.data(), prim, gc);
  if (!(prim[4] > 0.0) || !std::isfinite(prim[4])) {
    throw AdmissibilityError("cons_to_prim: non-positive pressure in " + describe_state(U));
  }
  return {prim[0], {prim[1], prim[2], prim[3]}, prim[4], prim[5]};
}

ConservedState prim_to_cons(const PrimitiveState& P, const GasProperties& gas) {
  check_admissible(P, "prim_to_cons");
  const detail::GasConstants gc(gas);
  const auto prim = to_array(P);
  State5 u{};
  detail::prim_to_cons_point(prim.data(), u.data(), gc);
  return ConservedState::from_array(u);
}

double viscosity(double T, const GasProperties& gas) {
  if (!(T > 0.0)) throw AdmissibilityError("viscosity: non-positive temperature " + std::to_string(T));
  return detail::viscosity_point(T, detail::GasConstants(gas));
}

double thermal_conductivity(double mu, const GasProperties& gas) {
  return gas.gamma * gas.R / (gas.gamma - 1.0) * mu / gas.Pr;
}

FluxTriple euler_flux(const PrimitiveState& P, const ConservedState& U) {
  const auto prim = to_array(P);
  const State5 u = U.as_array();
  FluxTriple F;
  for (int d = 0; d < 3; ++d) {
    double n[3] = {0.0, 0.0, 0.0};
    n[d] = 1.0;
    detail::euler_flux_dot(u.data(), prim.data(), n, F.dir[d].data());
  }
  return F;
}

std::array<Vec3, 3> stress_tensor(double mu, const LiftedGradient& g) {
  const double div = g[0][0] + g[1][1] + g[2][2];
  std::array<Vec3, 3> tau{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      // du_a/dx_b = g[b][a]
      tau[a][b] = mu * (g[b][a] + g[a][b]);
    }
    tau[a][a] -= mu * (2.0 / 3.0) * div;
  }
  return tau;
}

FluxTriple viscous_flux(const PrimitiveState& P, const LiftedGradient& grad, const GasProperties& gas) {
  const detail::GasConstants gc(gas);
  const double mu = detail::viscosity_point(P.T, gc);
  const double lambda = mu * gc.cp_over_Pr;
  const auto prim = to_array(P);
  double g[3 * kNumLifted];
  for (int d = 0; d < 3; ++d)
    for (int l = 0; l < kNumLifted; ++l) g[d * kNumLifted + l] = grad[d][l];
  double fv[15];
  detail::viscous_flux_point(prim.data(), g, mu, lambda, fv);
  FluxTriple F;
  for (int d = 0; d < 3; ++d)
    for (int v = 0; v < kNumVars; ++v) F.dir[d][v] = fv[d * kNumVars + v];
  return F;
}

State5 riemann_flux(const PrimitiveState& PL, const PrimitiveState& PR, const Vec3& n, const GasProperties& gas,
                    RiemannSolverKind kind) {
  check_admissible(PL, "riemann_flux (left)");
  check_admissible(PR, "riemann_flux (right)");
  const detail::GasConstants gc(gas);
  const auto pL = to_array(PL);
  const auto pR = to_array(PR);
  double uL[kNumVars];
  double uR[kNumVars];
  detail::prim_to_cons_point(pL.data(), uL, gc);
  detail::prim_to_cons_point(pR.data(), uR, gc);
  State5 f{};
  detail::riemann_point(kind, uL, pL.data(), uR, pR.data(), n.data(), gc, f.data());
  return f;
}

State5 split_flux_twopoint(const PrimitiveState& PL, const PrimitiveState& PR, const Vec3& metric,
                           const GasProperties& gas) {
  const detail::GasConstants gc(gas);
  const auto pL = to_array(PL);
  const auto pR = to_array(PR);
  State5 f{};
  detail::kep_twopoint(pL[0], pL[1], pL[2], pL[3], pL[4], detail::enthalpy(pL.data(), gc), pR[0], pR[1], pR[2],
                       pR[3], pR[4], detail::enthalpy(pR.data(), gc), metric.data(), f.data());
  return f;
}

std::array<double, kNumLifted> br1_lifting_flux(const PrimitiveState& PL, const PrimitiveState& PR) {
  return {0.5 * (PL.vel[0] + PR.vel[0]), 0.5 * (PL.vel[1] + PR.vel[1]), 0.5 * (PL.vel[2] + PR.vel[2]),
          0.5 * (PL.T + PR.T)};
}

std::string describe_state(const ConservedState& U) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "(rho=%.17g, mom=(%.17g, %.17g, %.17g), rhoE=%.17g)", U.rho, U.mom[0], U.mom[1],
                U.mom[2], U.rhoE);
  return buf;
}

}  // namespace hexdg
