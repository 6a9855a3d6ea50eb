#include "hexdg/time_integration.hpp"

#include <cmath>
#include <limits>

#include "hexdg/detail/pointwise.hpp"

namespace hexdg {

namespace {

RKScheme make_ck54() {
  RKScheme s;
  s.name = "carpenter-kennedy-5-4";
  s.stages = 5;
  s.order = 4;
  s.A = {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
         -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0};
  s.B = {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0,
         1720146321549.0 / 2090206949498.0, 3134564353537.0 / 4481467310338.0,
         2277821191437.0 / 14882151754819.0};
  s.c = {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
         2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0};
  return s;
}

RKScheme make_ndb144() {
  RKScheme s;
  s.name = "niegemann-14-4";
  s.stages = 14;
  s.order = 4;
  s.A = {0.0,
         -0.7188012108672410,
         -0.7785331173421570,
         -0.0053282796654044,
         -0.8552979934029281,
         -3.9564138245774565,
         -1.5780575380587385,
         -2.0837094552574054,
         -0.7483334182761610,
         -0.7032861106563359,
         0.0013917096117681,
         -0.0932075369637460,
         -0.9514200470875948,
         -7.1151571693922548};
  s.B = {0.0367762454319673, 0.3136296607553959, 0.1531848691869027, 0.0030097086818182, 0.3326293790646110,
         0.2440251405350864, 0.3718879239592277, 0.6204126221582444, 0.1524043173028741, 0.0760894927419266,
         0.0077604214040978, 0.0024647284755382, 0.0780348340049386, 5.5059777270269628};
  s.c = {0.0,
         0.0367762454319673,
         0.1249685262725025,
         0.2446177702277698,
         0.2476149531070420,
         0.2969311120382472,
         0.3978149645802642,
         0.5270854589440328,
         0.6981269994175695,
         0.8190890835352128,
         0.8527059887098624,
         0.8604711817462826,
         0.8627060376969976,
         0.8734213127600976};
  return s;
}

}  // namespace

const RKScheme& rk_scheme(const std::string& name) {
  static const RKScheme ck = make_ck54();
  static const RKScheme ndb = make_ndb144();
  if (name == ck.name) return ck;
  if (name == ndb.name) return ndb;
  throw ConfigError("unknown time integration scheme '" + name + "'");
}

std::vector<std::string> rk_scheme_names() { return {"carpenter-kennedy-5-4", "niegemann-14-4"}; }

void rk_step(std::vector<double>& U, std::vector<double>& K, std::vector<double>& Ut, double t, double dt,
             const RhsFn& rhs, const RKScheme& scheme) {
  const size_t n = U.size();
  K.assign(n, 0.0);
  Ut.resize(n);
  for (int i = 0; i < scheme.stages; ++i) {
    try {
      rhs(U, t + scheme.c[i] * dt, Ut);
    } catch (const AdmissibilityError& e) {
      throw AdmissibilityError("RK stage " + std::to_string(i + 1) + ": " + e.what());
    }
    const double a = scheme.A[i];
    const double b = scheme.B[i];
    for (size_t k = 0; k < n; ++k) {
      K[k] = a * K[k] + dt * Ut[k];
      U[k] += b * K[k];
    }
  }
}

double compute_dt(const Discretization& disc, const double* U, int elem_begin, int n_elems,
                  const TimestepConfig& cfg) {
  const detail::GasConstants gc(disc.gas);
  const int N = disc.N();
  const int nn = disc.nn();
  const bool visc = disc.viscous();
  const double diff_factor = std::max(4.0 / 3.0, disc.gas.gamma / disc.gas.Pr);
  double lam_a = 0.0;
  double lam_v = 0.0;
  for (int e = 0; e < n_elems; ++e)
    for (int a = 0; a < nn; ++a) {
      const size_t g = static_cast<size_t>(elem_begin + e) * nn + a;
      const double* u = &U[(static_cast<size_t>(e) * nn + a) * kNumVars];
      double prim[kNumPrim];
      detail::cons_to_prim_point(u, prim, gc);
      if (!(prim[0] > 0.0 && prim[4] > 0.0))
        throw AdmissibilityError("compute_dt: inadmissible state in element " + std::to_string(elem_begin + e));
      const double c = detail::sound_speed(prim, gc);
      const double sJ = disc.geo.sJ[g];
      double la = 0.0, lv = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double* ja = &disc.geo.Ja[(g * 3 + i) * 3];
        const double len2 = ja[0] * ja[0] + ja[1] * ja[1] + ja[2] * ja[2];
        la += std::abs(prim[1] * ja[0] + prim[2] * ja[1] + prim[3] * ja[2]) + c * std::sqrt(len2);
        lv += len2;
      }
      la *= sJ;
      if (!std::isfinite(la)) throw AdmissibilityError("compute_dt: non-finite wave speed");
      lam_a = std::max(lam_a, la);
      if (visc) {
        const double mu = detail::viscosity_point(prim[5], gc);
        lam_v = std::max(lam_v, diff_factor * mu / prim[0] * lv * sJ * sJ);
      }
    }
  double dt = std::numeric_limits<double>::infinity();
  if (lam_a > 0.0) dt = cfg.cfl * 2.0 / ((2.0 * N + 1.0) * lam_a);
  if (lam_v > 0.0) dt = std::min(dt, cfg.cfl_visc * 4.0 / ((2.0 * N + 1.0) * (2.0 * N + 1.0) * lam_v));
  return dt;
}

}  // namespace hexdg
