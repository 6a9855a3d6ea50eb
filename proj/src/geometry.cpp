#include "hexdg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hexdg {

namespace {

// Tensor-product interpolation of nc interleaved components from an n^3 grid
// to an m^3 grid with the 1-D matrix M (m x n).
void interp3(const Matrix& M, const double* in, double* out, int nc) {
  const int m = M.rows;
  const int n = M.cols;
  std::vector<double> t1(static_cast<size_t>(n) * n * m * nc, 0.0);
  std::vector<double> t2(static_cast<size_t>(n) * m * m * nc, 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < m; ++p)
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < nc; ++c)
            t1[(((size_t)k * n + j) * m + p) * nc + c] += M(p, a) * in[(((size_t)k * n + j) * n + a) * nc + c];
  for (int k = 0; k < n; ++k)
    for (int q = 0; q < m; ++q)
      for (int p = 0; p < m; ++p)
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < nc; ++c)
            t2[(((size_t)k * m + q) * m + p) * nc + c] += M(q, a) * t1[(((size_t)k * n + a) * m + p) * nc + c];
  for (size_t i = 0; i < (size_t)m * m * m * nc; ++i) out[i] = 0.0;
  for (int r = 0; r < m; ++r)
    for (int q = 0; q < m; ++q)
      for (int p = 0; p < m; ++p)
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < nc; ++c)
            out[(((size_t)r * m + q) * m + p) * nc + c] += M(r, a) * t2[(((size_t)a * m + q) * m + p) * nc + c];
}

// Tensor-product interpolation on a face grid (n^2 -> m^2).
void interp2(const Matrix& M, const double* in, double* out, int nc) {
  const int m = M.rows;
  const int n = M.cols;
  std::vector<double> t(static_cast<size_t>(n) * m * nc, 0.0);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < m; ++p)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < nc; ++c) t[((size_t)q * m + p) * nc + c] += M(p, a) * in[((size_t)q * n + a) * nc + c];
  for (size_t i = 0; i < (size_t)m * m * nc; ++i) out[i] = 0.0;
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < m; ++p)
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < nc; ++c) out[((size_t)q * m + p) * nc + c] += M(q, a) * t[((size_t)a * m + p) * nc + c];
}

// d/dxi_dir of nc interleaved components on an n^3 grid.
void deriv3(const Matrix& D, const double* in, double* out, int nc, int dir) {
  const int n = D.rows;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double* o = &out[(((size_t)k * n + j) * n + i) * nc];
        for (int c = 0; c < nc; ++c) o[c] = 0.0;
        for (int a = 0; a < n; ++a) {
          const int ii = dir == 0 ? a : i;
          const int jj = dir == 1 ? a : j;
          const int kk = dir == 2 ? a : k;
          const double d = D(dir == 0 ? i : dir == 1 ? j : k, a);
          const double* src = &in[(((size_t)kk * n + jj) * n + ii) * nc];
          for (int c = 0; c < nc; ++c) o[c] += d * src[c];
        }
      }
}

struct ElementGeo {
  std::vector<double> X;   // n^3 x 3 on geometry nodes
  std::vector<double> dX;  // n^3 x 9, dX[d*3 + j] = dx_d / dxi_j
  std::vector<double> Ja;  // n^3 x 9, Ja[i*3 + d]
};

ElementGeo element_metrics(const Mesh& mesh, const Basis1D& bg, int e) {
  const int n = bg.n();
  const size_t nn = static_cast<size_t>(n) * n * n;
  ElementGeo g;
  g.X.assign(&mesh.coords[e * nn * 3], &mesh.coords[(e + 1) * nn * 3]);
  g.dX.assign(nn * 9, 0.0);
  std::vector<double> tmp(nn * 3);
  for (int j = 0; j < 3; ++j) {
    deriv3(bg.D, g.X.data(), tmp.data(), 3, j);
    for (size_t a = 0; a < nn; ++a)
      for (int d = 0; d < 3; ++d) g.dX[a * 9 + d * 3 + j] = tmp[a * 3 + d];
  }
  g.Ja.assign(nn * 9, 0.0);
  std::vector<double> V(nn * 3);
  std::vector<double> dV(nn * 3);
  for (int nc = 0; nc < 3; ++nc) {
    const int mc = (nc + 1) % 3;
    const int lc = (nc + 2) % 3;
    for (size_t a = 0; a < nn; ++a)
      for (int j = 0; j < 3; ++j) V[a * 3 + j] = g.X[a * 3 + lc] * g.dX[a * 9 + mc * 3 + j];
    // Ja^i_n = -(curl V)_i
    for (int dir = 0; dir < 3; ++dir) {
      deriv3(bg.D, V.data(), dV.data(), 3, dir);
      for (size_t a = 0; a < nn; ++a) {
        // d/dxi_dir V_c contributes to curl component i with sign
        for (int c = 0; c < 3; ++c) {
          if (c == dir) continue;
          const int i = 3 - c - dir;
          const double sgn = ((dir - i + 3) % 3 == 1) ? 1.0 : -1.0;
          g.Ja[a * 9 + i * 3 + nc] -= sgn * dV[a * 3 + c];
        }
      }
    }
  }
  return g;
}

double det3(const double* a) {
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

// Face slice of an n^3 nc-component field on the given local side, in the
// element's own face coordinates (p fastest).
std::vector<double> face_slice(const double* f, int nc, int loc, int n) {
  std::vector<double> out(static_cast<size_t>(n) * n * nc);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      const auto ijk = face_volume_index(loc, p, q, n - 1);
      const double* src = &f[(((size_t)ijk[2] * n + ijk[1]) * n + ijk[0]) * nc];
      for (int c = 0; c < nc; ++c) out[((size_t)q * n + p) * nc + c] = src[c];
    }
  return out;
}

}  // namespace

Geometry compute_metrics(const Mesh& mesh, const Basis1D& basis, bool subcell_metrics) {
  if (mesh.N != basis.N) {
    throw MeshError("mesh mapping degree " + std::to_string(mesh.N) + " differs from solution degree " +
                    std::to_string(basis.N));
  }
  if (subcell_metrics && basis.node_type != NodeType::LGL) throw MeshError("subcell metrics require LGL nodes");
  const Basis1D bg = build_basis(mesh.N, NodeType::LGL);
  const bool same = basis.node_type == NodeType::LGL;
  const Matrix M = interpolation_matrix(bg, basis.nodes);
  const int n = basis.n();
  const int N = basis.N;
  const size_t nn = static_cast<size_t>(n) * n * n;
  const size_t nf = static_cast<size_t>(n) * n;

  Geometry geo;
  geo.N = N;
  geo.n_elems = mesh.n_elems;
  geo.n_sides = mesh.n_sides();
  geo.x.resize(mesh.n_elems * nn * 3);
  geo.J.resize(mesh.n_elems * nn);
  geo.sJ.resize(mesh.n_elems * nn);
  geo.Ja.resize(mesh.n_elems * nn * 9);
  geo.face_n.resize(geo.n_sides * nf * 3);
  geo.face_s.resize(geo.n_sides * nf);
  geo.face_x.resize(geo.n_sides * nf * 3);
  geo.face_n_replica.assign(geo.n_sides * nf * 3, 0.0);
  geo.face_s_replica.assign(geo.n_sides * nf, 0.0);
  if (subcell_metrics) geo.fv_metric.resize(mesh.n_elems * 3 * N * nf * 3);

  std::vector<double> dXs(nn * 9);
  for (int e = 0; e < mesh.n_elems; ++e) {
    const ElementGeo g = element_metrics(mesh, bg, e);
    double* xe = &geo.x[e * nn * 3];
    double* Jae = &geo.Ja[e * nn * 9];
    if (same) {
      std::copy(g.X.begin(), g.X.end(), xe);
      std::copy(g.Ja.begin(), g.Ja.end(), Jae);
      dXs = g.dX;
    } else {
      interp3(M, g.X.data(), xe, 3);
      interp3(M, g.Ja.data(), Jae, 9);
      interp3(M, g.dX.data(), dXs.data(), 9);
    }
    for (size_t a = 0; a < nn; ++a) {
      const double J = det3(&dXs[a * 9]);
      if (!(J > 0.0)) {
        throw MeshError("element " + std::to_string(e) + ": non-positive Jacobian " + std::to_string(J) +
                        " at node " + std::to_string(a));
      }
      geo.J[e * nn + a] = J;
      geo.sJ[e * nn + a] = 1.0 / J;
    }

    for (int loc = 0; loc < kNumLocSides; ++loc) {
      const int sid = mesh.elem_sides[e][loc];
      const Side& side = mesh.sides[sid];
      const bool primary = side.primary.elem == e && side.primary.loc_side == loc;
      const int axis = side_axis(loc);
      const double sgn = side_sign(loc);
      std::vector<double> ja_face = face_slice(g.Ja.data() + axis * 3, 9, loc, n);
      std::vector<double> x_face = face_slice(g.X.data(), 3, loc, n);
      std::vector<double> nv(nf * 3), xf(nf * 3);
      std::vector<double> ja3(nf * 3);
      for (size_t a = 0; a < nf; ++a)
        for (int d = 0; d < 3; ++d) ja3[a * 3 + d] = ja_face[a * 9 + d];
      if (same) {
        nv = ja3;
        xf = x_face;
      } else {
        interp2(M, ja3.data(), nv.data(), 3);
        interp2(M, x_face.data(), xf.data(), 3);
      }
      for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p) {
          // own face node (p, q) corresponds to primary face node orient(p, q)
          const auto pq = primary ? std::array<int, 2>{p, q} : orient_face(side.orientation, p, q, N);
          const size_t own = (size_t)q * n + p;
          const size_t dst = (size_t)pq[1] * n + pq[0];
          double v[3];
          for (int d = 0; d < 3; ++d) v[d] = sgn * nv[own * 3 + d];
          const double s = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
          double* nd = primary ? &geo.face_n[(sid * nf + dst) * 3] : &geo.face_n_replica[(sid * nf + dst) * 3];
          for (int d = 0; d < 3; ++d) nd[d] = v[d] / s;
          if (primary) {
            geo.face_s[sid * nf + dst] = s;
            for (int d = 0; d < 3; ++d) geo.face_x[(sid * nf + dst) * 3 + d] = xf[own * 3 + d];
          } else {
            geo.face_s_replica[sid * nf + dst] = s;
          }
        }
    }

    if (subcell_metrics) {
      for (int dir = 0; dir < 3; ++dir) {
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
              const int r[3] = {i, j, k};
              if (r[dir] != 0) continue;
              const int line = line_index(dir, i, j, k, n);
              auto node = [&](int m) {
                int rr[3] = {i, j, k};
                rr[dir] = m;
                return ((size_t)rr[2] * n + rr[1]) * n + rr[0];
              };
              double acc[3];
              for (int d = 0; d < 3; ++d) acc[d] = Jae[node(0) * 9 + dir * 3 + d];
              for (int m = 0; m < N; ++m) {
                for (int d = 0; d < 3; ++d) {
                  double dj = 0.0;
                  for (int a = 0; a < n; ++a) dj += basis.D(m, a) * Jae[node(a) * 9 + dir * 3 + d];
                  acc[d] += basis.weights[m] * dj;
                }
                double* dst = &geo.fv_metric[((((size_t)e * 3 + dir) * N + m) * nf + line) * 3];
                for (int d = 0; d < 3; ++d) dst[d] = acc[d];
              }
            }
      }
    }
  }
  return geo;
}

double metric_identity_residual(const Geometry& geo, const Basis1D& basis) {
  const int n = geo.n();
  const size_t nn = geo.nn();
  double worst = 0.0;
  for (int e = 0; e < geo.n_elems; ++e) {
    const double* Ja = &geo.Ja[e * nn * 9];
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (int d = 0; d < 3; ++d) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
              s += basis.D(i, a) * Ja[(((size_t)k * n + j) * n + a) * 9 + 0 * 3 + d];
              s += basis.D(j, a) * Ja[(((size_t)k * n + a) * n + i) * 9 + 1 * 3 + d];
              s += basis.D(k, a) * Ja[(((size_t)a * n + j) * n + i) * 9 + 2 * 3 + d];
            }
            worst = std::max(worst, std::abs(s));
          }
  }
  return worst;
}

}  // namespace hexdg
