#pragma once

// Raw-pointer point kernels shared by the public physics API and the DG
// kernels. Primitive layout: rho, u, v, w, p, T. Gradient layout: g[d*4 + l].

#include <algorithm>
#include <cmath>

#include "hexdg/equations.hpp"

namespace hexdg::detail {

struct GasConstants {
  double gamma;
  double gm1;
  double inv_gm1;
  double inv_R;
  double mu_ref;
  double T_ref;
  double inv_T_ref;
  bool sutherland;
  double cp_over_Pr;  // gamma R / ((gamma - 1) Pr)

  explicit GasConstants(const GasProperties& g)
      : gamma(g.gamma),
        gm1(g.gamma - 1.0),
        inv_gm1(1.0 / (g.gamma - 1.0)),
        inv_R(1.0 / g.R),
        mu_ref(g.mu_ref),
        T_ref(g.T_ref),
        inv_T_ref(1.0 / g.T_ref),
        sutherland(g.viscosity_law == ViscosityLaw::sutherland),
        cp_over_Pr(g.gamma * g.R / ((g.gamma - 1.0) * g.Pr)) {}
};

inline void cons_to_prim_point(const double* u, double* prim, const GasConstants& gc) {
  const double rho = u[0];
  const double sr = 1.0 / rho;
  const double vx = u[1] * sr;
  const double vy = u[2] * sr;
  const double vz = u[3] * sr;
  const double p = gc.gm1 * (u[4] - 0.5 * (u[1] * vx + u[2] * vy + u[3] * vz));
  prim[0] = rho;
  prim[1] = vx;
  prim[2] = vy;
  prim[3] = vz;
  prim[4] = p;
  prim[5] = p * sr * gc.inv_R;
}

inline bool admissible(const double* prim) { return prim[0] > 0.0 && prim[4] > 0.0; }

inline void prim_to_cons_point(const double* prim, double* u, const GasConstants& gc) {
  const double rho = prim[0];
  u[0] = rho;
  u[1] = rho * prim[1];
  u[2] = rho * prim[2];
  u[3] = rho * prim[3];
  u[4] = prim[4] * gc.inv_gm1 + 0.5 * rho * (prim[1] * prim[1] + prim[2] * prim[2] + prim[3] * prim[3]);
}

inline double viscosity_point(double T, const GasConstants& gc) {
  if (!gc.sutherland) return gc.mu_ref;
  const double r = T * gc.inv_T_ref;
  return gc.mu_ref * 1.4042 * r * std::sqrt(r) / (r + 0.4042);
}

inline double sound_speed(const double* prim, const GasConstants& gc) {
  return std::sqrt(gc.gamma * prim[4] / prim[0]);
}

/// F(U) . n for a (not necessarily unit) vector n.
inline void euler_flux_dot(const double* u, const double* prim, const double* n, double* f) {
  const double vn = prim[1] * n[0] + prim[2] * n[1] + prim[3] * n[2];
  const double p = prim[4];
  f[0] = u[0] * vn;
  f[1] = u[1] * vn + p * n[0];
  f[2] = u[2] * vn + p * n[1];
  f[3] = u[3] * vn + p * n[2];
  f[4] = (u[4] + p) * vn;
}

/// Local Lax-Friedrichs flux for a unit normal.
inline void llf_flux(const double* uL, const double* pL, const double* uR, const double* pR, const double* n,
                     const GasConstants& gc, double* f) {
  double fL[5];
  double fR[5];
  euler_flux_dot(uL, pL, n, fL);
  euler_flux_dot(uR, pR, n, fR);
  const double vnL = pL[1] * n[0] + pL[2] * n[1] + pL[3] * n[2];
  const double vnR = pR[1] * n[0] + pR[2] * n[1] + pR[3] * n[2];
  const double lam = std::max(std::abs(vnL) + sound_speed(pL, gc), std::abs(vnR) + sound_speed(pR, gc));
  for (int v = 0; v < 5; ++v) f[v] = 0.5 * (fL[v] + fR[v]) - 0.5 * lam * (uR[v] - uL[v]);
}

/// HLLC flux (Toro) with Davis wave-speed estimates, unit normal.
inline void hllc_flux(const double* uL, const double* pL, const double* uR, const double* pR, const double* n,
                      const GasConstants& gc, double* f) {
  const double vnL = pL[1] * n[0] + pL[2] * n[1] + pL[3] * n[2];
  const double vnR = pR[1] * n[0] + pR[2] * n[1] + pR[3] * n[2];
  const double aL = sound_speed(pL, gc);
  const double aR = sound_speed(pR, gc);
  const double sL = std::min(vnL - aL, vnR - aR);
  const double sR = std::max(vnL + aL, vnR + aR);
  if (sL >= 0.0) {
    euler_flux_dot(uL, pL, n, f);
    return;
  }
  if (sR <= 0.0) {
    euler_flux_dot(uR, pR, n, f);
    return;
  }
  const double rhoL = pL[0];
  const double rhoR = pR[0];
  const double sM = (pR[4] - pL[4] + rhoL * vnL * (sL - vnL) - rhoR * vnR * (sR - vnR)) /
                    (rhoL * (sL - vnL) - rhoR * (sR - vnR));
  const bool left = sM >= 0.0;
  const double* u = left ? uL : uR;
  const double* pr = left ? pL : pR;
  const double s = left ? sL : sR;
  const double vn = left ? vnL : vnR;
  double fK[5];
  euler_flux_dot(u, pr, n, fK);
  const double rho = pr[0];
  const double factor = rho * (s - vn) / (s - sM);
  double uStar[5];
  uStar[0] = factor;
  for (int d = 0; d < 3; ++d) uStar[1 + d] = factor * (pr[1 + d] + (sM - vn) * n[d]);
  uStar[4] = factor * (u[4] / rho + (sM - vn) * (sM + pr[4] / (rho * (s - vn))));
  for (int v = 0; v < 5; ++v) f[v] = fK[v] + s * (uStar[v] - u[v]);
}

inline void riemann_point(RiemannSolverKind kind, const double* uL, const double* pL, const double* uR,
                          const double* pR, const double* n, const GasConstants& gc, double* f) {
  if (kind == RiemannSolverKind::hllc) {
    hllc_flux(uL, pL, uR, pR, n, gc, f);
  } else {
    llf_flux(uL, pL, uR, pR, n, gc, f);
  }
}

/// Specific total enthalpy (rho e + p) / rho from primitives.
inline double enthalpy(const double* prim, const GasConstants& gc) {
  return gc.gamma * gc.inv_gm1 * prim[4] / prim[0] +
         0.5 * (prim[1] * prim[1] + prim[2] * prim[2] + prim[3] * prim[3]);
}

/// Kinetic-energy-preserving two-point flux with arithmetic means of
/// rho, velocity, pressure, enthalpy and the metric vector.
inline void kep_twopoint(double rhoL, double uL, double vL, double wL, double pL, double hL, double rhoR,
                         double uR, double vR, double wR, double pR, double hR, const double* metric,
                         double* f) {
  const double rho = 0.5 * (rhoL + rhoR);
  const double u = 0.5 * (uL + uR);
  const double v = 0.5 * (vL + vR);
  const double w = 0.5 * (wL + wR);
  const double p = 0.5 * (pL + pR);
  const double h = 0.5 * (hL + hR);
  const double q = u * metric[0] + v * metric[1] + w * metric[2];
  const double mflux = rho * q;
  f[0] = mflux;
  f[1] = mflux * u + p * metric[0];
  f[2] = mflux * v + p * metric[1];
  f[3] = mflux * w + p * metric[2];
  f[4] = mflux * h;
}

/// Cartesian diffusive flux fv[d*5 + var] = (0, -tau, -tau.u + q)_d.
inline void viscous_flux_point(const double* prim, const double* grad, double mu, double lambda, double* fv) {
  const double* gx = grad;      // d/dx of (u, v, w, T)
  const double* gy = grad + 4;  // d/dy
  const double* gz = grad + 8;  // d/dz
  const double div = gx[0] + gy[1] + gz[2];
  const double t_xx = mu * (2.0 * gx[0] - (2.0 / 3.0) * div);
  const double t_yy = mu * (2.0 * gy[1] - (2.0 / 3.0) * div);
  const double t_zz = mu * (2.0 * gz[2] - (2.0 / 3.0) * div);
  const double t_xy = mu * (gy[0] + gx[1]);
  const double t_xz = mu * (gz[0] + gx[2]);
  const double t_yz = mu * (gz[1] + gy[2]);
  const double u = prim[1];
  const double v = prim[2];
  const double w = prim[3];
  fv[0] = 0.0;
  fv[1] = -t_xx;
  fv[2] = -t_xy;
  fv[3] = -t_xz;
  fv[4] = -(t_xx * u + t_xy * v + t_xz * w) - lambda * gx[3];
  fv[5] = 0.0;
  fv[6] = -t_xy;
  fv[7] = -t_yy;
  fv[8] = -t_yz;
  fv[9] = -(t_xy * u + t_yy * v + t_yz * w) - lambda * gy[3];
  fv[10] = 0.0;
  fv[11] = -t_xz;
  fv[12] = -t_yz;
  fv[13] = -t_zz;
  fv[14] = -(t_xz * u + t_yz * v + t_zz * w) - lambda * gz[3];
}

}  // namespace hexdg::detail
