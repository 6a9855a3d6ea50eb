#include "hexdg/testcases.hpp"

#include <cmath>
#include <numbers>

#include "hexdg/detail/pointwise.hpp"

namespace hexdg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

State5 ManufacturedSolution::exact(const Vec3& x, double t) const {
  const double g = 2.0 + amplitude * std::sin(kTwoPi * (x[0] + x[1] + x[2] - speed * t));
  return {g, g, g, g, g * g};
}

void ManufacturedSolution::source(const Vec3& x, double t, const GasProperties& gas, double* S) const {
  const double phase = kTwoPi * (x[0] + x[1] + x[2] - speed * t);
  const double g = 2.0 + amplitude * std::sin(phase);
  const double g1 = kTwoPi * amplitude * std::cos(phase);
  const double g2 = -kTwoPi * kTwoPi * amplitude * std::sin(phase);
  const double gm1 = gas.gamma - 1.0;
  const double p1 = gm1 * (2.0 * g - 1.5) * g1;
  const double a = speed;
  S[0] = (3.0 - a) * g1;
  S[1] = (3.0 - a) * g1 + p1;
  S[2] = S[1];
  S[3] = S[1];
  S[4] = (6.0 - 2.0 * a) * g * g1 + 3.0 * p1 - 3.0 * gas.gamma * gas.mu_ref * g2 / gas.Pr;
}

GasProperties TGVSetup::gas(double gamma, double R, double Pr) const {
  GasProperties g;
  g.gamma = gamma;
  g.R = R;
  g.Pr = Pr;
  g.mu_ref = viscous ? mu0() : 0.0;
  g.viscosity_law = sutherland ? ViscosityLaw::sutherland : ViscosityLaw::constant;
  g.T_ref = p0(gamma) / (rho0 * R);
  return g;
}

PrimitiveState TGVSetup::state(const Vec3& x, const GasProperties& gas) const {
  const double sx = std::sin(x[0] / L), cx = std::cos(x[0] / L);
  const double sy = std::sin(x[1] / L), cy = std::cos(x[1] / L);
  const double cz = std::cos(x[2] / L);
  PrimitiveState P;
  P.vel = {U0 * sx * cy * cz, -U0 * cx * sy * cz, 0.0};
  const double p_bg = p0(gas.gamma);
  P.p = p_bg + rho0 * U0 * U0 / 16.0 * (std::cos(2.0 * x[0] / L) + std::cos(2.0 * x[1] / L)) *
                   (2.0 + std::cos(2.0 * x[2] / L));
  if (version == 1) {
    P.rho = rho0;
  } else {
    const double T0 = p_bg / (rho0 * gas.R);
    P.rho = P.p / (gas.R * T0);
  }
  P.T = P.p / (P.rho * gas.R);
  return P;
}

std::vector<double> project_initial(const Discretization& disc, const std::function<State5(const Vec3&)>& f) {
  std::vector<double> U(disc.field_size());
  const size_t n_nodes = static_cast<size_t>(disc.mesh.n_elems) * disc.nn();
  for (size_t a = 0; a < n_nodes; ++a) {
    const double* x = &disc.geo.x[a * 3];
    const State5 u = f({x[0], x[1], x[2]});
    for (int v = 0; v < kNumVars; ++v) U[a * kNumVars + v] = u[v];
  }
  return U;
}

std::vector<double> tgv_init(const Discretization& disc, const TGVSetup& setup) {
  return project_initial(disc, [&](const Vec3& x) {
    return prim_to_cons(setup.state(x, disc.gas), disc.gas).as_array();
  });
}

std::vector<double> sod_init(const Discretization& disc, const SodSetup& setup) {
  const int nn = disc.nn();
  std::vector<double> U(disc.field_size());
  const State5 uL = prim_to_cons(setup.left, disc.gas).as_array();
  const State5 uR = prim_to_cons(setup.right, disc.gas).as_array();
  for (int e = 0; e < disc.mesh.n_elems; ++e) {
    double xc = 0.0;
    for (int a = 0; a < nn; ++a) xc += disc.geo.x[(static_cast<size_t>(e) * nn + a) * 3];
    xc /= nn;
    for (int a = 0; a < nn; ++a) {
      const size_t idx = static_cast<size_t>(e) * nn + a;
      const double x = disc.geo.x[idx * 3];
      const bool left = x < setup.x0 || (x == setup.x0 && xc < setup.x0);
      const State5& u = left ? uL : uR;
      for (int v = 0; v < kNumVars; ++v) U[idx * kNumVars + v] = u[v];
    }
  }
  return U;
}

void sod_boundaries(SchemeConfig& scheme, const SodSetup& setup, const GasProperties& /*gas*/) {
  const PrimitiveState L = setup.left;
  const PrimitiveState R = setup.right;
  scheme.dirichlet[1] = [L](const Vec3&, double) { return L; };
  scheme.dirichlet[2] = [R](const Vec3&, double) { return R; };
}

void element_partials(const Discretization& disc, int ge, const double* U, const double* grad, double* out) {
  const int n = disc.n();
  const int nn = disc.nn();
  const auto& w = disc.basis.weights;
  const detail::GasConstants gc(disc.gas);
  for (int i = 0; i < kNumPartials; ++i) out[i] = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int a = (k * n + j) * n + i;
        const size_t g = static_cast<size_t>(ge) * nn + a;
        const double wJ = w[i] * w[j] * w[k] * disc.geo.J[g];
        const double* u = &U[a * kNumVars];
        double prim[kNumPrim];
        detail::cons_to_prim_point(u, prim, gc);
        out[0] += wJ;
        for (int v = 0; v < kNumVars; ++v) out[1 + v] += wJ * u[v];
        out[6] += wJ * u[0] * (prim[1] * prim[1] + prim[2] * prim[2] + prim[3] * prim[3]);
        if (grad && disc.viscous()) {
          const double* G = &grad[a * kNumGrad];
          auto d = [G](int dir, int var) { return G[dir * kNumLifted + var]; };
          const double ox = d(1, 2) - d(2, 1);
          const double oy = d(2, 0) - d(0, 2);
          const double oz = d(0, 1) - d(1, 0);
          const double div = d(0, 0) + d(1, 1) + d(2, 2);
          const double mu = detail::viscosity_point(prim[5], gc);
          out[7] += wJ * mu * (ox * ox + oy * oy + oz * oz);
          out[8] += wJ * mu * div * div;
        }
      }
}

AnalysisRecord reduce_partials(const std::vector<double>& partials, const AnalysisScales& sc) {
  double s[kNumPartials] = {};
  const size_t ne = partials.size() / kNumPartials;
  for (size_t e = 0; e < ne; ++e)
    for (int i = 0; i < kNumPartials; ++i) s[i] += partials[e * kNumPartials + i];
  AnalysisRecord r;
  const double vol = s[0];
  for (int v = 0; v < kNumVars; ++v) r.totals[v] = s[1 + v];
  r.E_k = s[6] / (2.0 * sc.rho0 * sc.U0 * sc.U0 * vol);
  const double diss = sc.L / (sc.rho0 * sc.U0 * sc.U0 * sc.U0 * vol);
  r.eps_S = diss * s[7];
  r.eps_D = 4.0 / 3.0 * diss * s[8];
  return r;
}

AnalysisRecord analyze(const Discretization& disc, const std::vector<double>& U, const std::vector<double>& grad,
                       const AnalysisScales& scales) {
  const int nn = disc.nn();
  std::vector<double> partials(static_cast<size_t>(disc.mesh.n_elems) * kNumPartials);
  for (int e = 0; e < disc.mesh.n_elems; ++e)
    element_partials(disc, e, &U[static_cast<size_t>(e) * nn * kNumVars],
                     grad.empty() ? nullptr : &grad[static_cast<size_t>(e) * nn * kNumGrad],
                     &partials[static_cast<size_t>(e) * kNumPartials]);
  return reduce_partials(partials, scales);
}

double l2_density_error(const Discretization& disc, const std::vector<double>& U,
                        const std::function<double(const Vec3&)>& rho_exact) {
  const int n = disc.n();
  const int nn = disc.nn();
  std::vector<double> xq, wq;
  quadrature(disc.N() + 3, NodeType::GL, xq, wq);
  const Matrix I = interpolation_matrix(disc.basis, xq);
  const int m = static_cast<int>(xq.size());
  // Tensor-product interpolation of (rho, J, x, y, z) to the fine points.
  std::vector<double> src(static_cast<size_t>(nn) * 5), t1, t2, t3;
  double err = 0.0;
  for (int e = 0; e < disc.mesh.n_elems; ++e) {
    for (int a = 0; a < nn; ++a) {
      const size_t g = static_cast<size_t>(e) * nn + a;
      src[a * 5 + 0] = U[g * kNumVars];
      src[a * 5 + 1] = disc.geo.J[g];
      for (int d = 0; d < 3; ++d) src[a * 5 + 2 + d] = disc.geo.x[g * 3 + d];
    }
    t1.assign(static_cast<size_t>(m) * n * n * 5, 0.0);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < m; ++p)
          for (int i = 0; i < n; ++i)
            for (int c = 0; c < 5; ++c)
              t1[((k * n + j) * m + p) * 5 + c] += I(p, i) * src[((k * n + j) * n + i) * 5 + c];
    t2.assign(static_cast<size_t>(m) * m * n * 5, 0.0);
    for (int k = 0; k < n; ++k)
      for (int q = 0; q < m; ++q)
        for (int j = 0; j < n; ++j)
          for (int p = 0; p < m; ++p)
            for (int c = 0; c < 5; ++c)
              t2[((k * m + q) * m + p) * 5 + c] += I(q, j) * t1[((k * n + j) * m + p) * 5 + c];
    t3.assign(static_cast<size_t>(m) * m * m * 5, 0.0);
    for (int r = 0; r < m; ++r)
      for (int k = 0; k < n; ++k)
        for (int q = 0; q < m; ++q)
          for (int p = 0; p < m; ++p)
            for (int c = 0; c < 5; ++c)
              t3[((r * m + q) * m + p) * 5 + c] += I(r, k) * t2[((k * m + q) * m + p) * 5 + c];
    for (int r = 0; r < m; ++r)
      for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p) {
          const double* v = &t3[((r * m + q) * m + p) * 5];
          const double diff = v[0] - rho_exact({v[2], v[3], v[4]});
          err += wq[p] * wq[q] * wq[r] * v[1] * diff * diff;
        }
  }
  return std::sqrt(err);
}

}  // namespace hexdg
