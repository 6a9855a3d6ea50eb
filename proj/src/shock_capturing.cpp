#include "hexdg/shock_capturing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hexdg/detail/pointwise.hpp"
#include "hexdg/geometry.hpp"

namespace hexdg {

double indicator_threshold(int N, const IndicatorConfig& cfg) {
  return cfg.threshold_a * std::pow(10.0, -cfg.threshold_b * std::pow(N + 1.0, cfg.threshold_c));
}

double modal_energy_indicator(const Basis1D& basis, const double* q) {
  const int n = basis.n();
  const int N = basis.N;
  const Matrix& Vi = basis.vandermonde_inv;
  std::vector<double> a(q, q + n * n * n), b(n * n * n, 0.0);
  for (int dir = 0; dir < 3; ++dir) {
    std::fill(b.begin(), b.end(), 0.0);
    for (int line = 0; line < n * n; ++line)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += Vi(m, j) * a[line_node(dir, j, line, n)];
        b[line_node(dir, m, line, n)] = s;
      }
    a.swap(b);
  }
  double total = 0.0, clip1 = 0.0, clip2 = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double e = a[(k * n + j) * n + i] * a[(k * n + j) * n + i];
        const int top = std::max(i, std::max(j, k));
        total += e;
        if (top <= N - 1) clip1 += e;
        if (top <= N - 2) clip2 += e;
      }
  if (total <= 0.0) return 0.0;
  double E = (total - clip1) / total;
  if (N >= 2 && clip1 > 0.0) E = std::max(E, (clip1 - clip2) / clip1);
  return E;
}

double indicator_alpha(const Basis1D& basis, const double* U_elem, const GasProperties& gas,
                       const IndicatorConfig& cfg) {
  if (cfg.alpha_fixed >= 0.0) return std::min(cfg.alpha_fixed, 1.0);
  const int nn = basis.n() * basis.n() * basis.n();
  const detail::GasConstants gc(gas);
  std::vector<double> q(nn);
  for (int a = 0; a < nn; ++a) {
    double prim[kNumPrim];
    detail::cons_to_prim_point(&U_elem[a * kNumVars], prim, gc);
    q[a] = prim[0] * prim[4];
  }
  const double E = modal_energy_indicator(basis, q.data());
  const double T = indicator_threshold(basis.N, cfg);
  const double s = std::log((1.0 - cfg.sharpness_eps) / cfg.sharpness_eps);
  double alpha = 1.0 / (1.0 + std::exp(-s / T * (E - T)));
  if (alpha < cfg.alpha_min) alpha = 0.0;
  else if (alpha > 1.0 - cfg.alpha_min) alpha = 1.0;
  return std::min(alpha, cfg.alpha_max);
}

std::vector<double> subcell_widths(const Basis1D& basis) {
  if (basis.node_type != NodeType::LGL) throw std::invalid_argument("subcell grid requires LGL nodes");
  return basis.weights;
}

void fv_subcell_volume(const Basis1D& basis, const double* U_elem, const double* prim_elem,
                       const double* fv_metric_elem, const GasProperties& gas, RiemannSolverKind riemann,
                       double* out) {
  const int n = basis.n();
  const int N = basis.N;
  const int nf = n * n;
  const detail::GasConstants gc(gas);
  std::vector<double> inv_w(n);
  for (int m = 0; m < n; ++m) inv_w[m] = 1.0 / basis.weights[m];
  for (int dir = 0; dir < 3; ++dir)
    for (int m = 0; m < N; ++m)
      for (int line = 0; line < nf; ++line) {
        const double* Jm = &fv_metric_elem[((dir * N + m) * nf + line) * 3];
        const double s = std::sqrt(Jm[0] * Jm[0] + Jm[1] * Jm[1] + Jm[2] * Jm[2]);
        const double nv[3] = {Jm[0] / s, Jm[1] / s, Jm[2] / s};
        const int a = line_node(dir, m, line, n);
        const int b = line_node(dir, m + 1, line, n);
        double f[kNumVars];
        detail::riemann_point(riemann, &U_elem[a * kNumVars], &prim_elem[a * kNumPrim], &U_elem[b * kNumVars],
                              &prim_elem[b * kNumPrim], nv, gc, f);
        for (int v = 0; v < kNumVars; ++v) {
          const double fs = f[v] * s;
          out[a * kNumVars + v] += fs * inv_w[m];
          out[b * kNumVars + v] -= fs * inv_w[m + 1];
        }
      }
}

void blend(const double* R_dg, const double* R_fv, double alpha, double* R, int count) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("blend: alpha outside [0, 1]");
  for (int i = 0; i < count; ++i) R[i] = (1.0 - alpha) * R_dg[i] + alpha * R_fv[i];
}

}  // namespace hexdg
