#include "hexdg/dg_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "hexdg/detail/pointwise.hpp"

namespace hexdg {

Discretization::Discretization(Mesh mesh_in, int N, NodeType node_type, GasProperties gas_in, SchemeConfig scheme_in)
    : mesh(std::move(mesh_in)), basis(build_basis(N, node_type)), gas(gas_in), scheme(std::move(scheme_in)) {
  gas.validate();
  if (N < 1 || N + 1 > kMaxNodes1D)
    throw ConfigError("polynomial degree N = " + std::to_string(N) + " outside [1, " + std::to_string(kMaxNodes1D - 1) + "]");
  if (scheme.split && node_type != NodeType::LGL)
    throw ConfigError("split-form volume integral requires LGL nodes (operator = split, nodetype = GL)");
  if (scheme.shock_capturing && node_type != NodeType::LGL)
    throw ConfigError("shock capturing requires LGL nodes (shockcapturing = on, nodetype = GL)");
  for (const Side& s : mesh.sides) {
    if (!s.is_boundary()) continue;
    if (s.bc_tag < 1 || s.bc_tag > 6 || !scheme.dirichlet[s.bc_tag])
      throw ConfigError("no boundary state configured for boundary tag " + std::to_string(s.bc_tag));
  }
  geo = compute_metrics(mesh, basis, scheme.shock_capturing);
}

RankDomain RankDomain::build(const Discretization& disc, const Partition& part) {
  const Mesh& mesh = disc.mesh;
  RankDomain dom;
  dom.rank = part.rank;
  dom.elem_begin = part.elem_begin;
  dom.n_elems = part.n_elems();

  std::unordered_map<int, int> neighbor_of;
  for (const auto& nb : part.neighbors)
    for (int s : nb.sides) neighbor_of[s] = nb.rank;

  std::vector<int> gids;
  for (int e = part.elem_begin; e < part.elem_end; ++e)
    for (int l = 0; l < kNumLocSides; ++l) gids.push_back(mesh.elem_sides[e][l]);
  std::sort(gids.begin(), gids.end());
  gids.erase(std::unique(gids.begin(), gids.end()), gids.end());

  std::unordered_map<int, int> local_of;
  for (int gid : gids) {
    const Side& s = mesh.sides[gid];
    LocalSide ls;
    ls.gid = gid;
    ls.orientation = s.orientation;
    ls.bc_tag = s.bc_tag;
    if (part.owns(s.primary.elem)) {
      ls.prim_elem = s.primary.elem - part.elem_begin;
      ls.prim_loc = s.primary.loc_side;
    }
    if (!s.is_boundary() && part.owns(s.replica.elem)) {
      ls.rep_elem = s.replica.elem - part.elem_begin;
      ls.rep_loc = s.replica.loc_side;
    }
    const int idx = static_cast<int>(dom.sides.size());
    local_of[gid] = idx;
    if (s.is_boundary()) {
      ls.kind = SideKind::boundary;
      dom.boundary_sides.push_back(idx);
    } else if (ls.prim_elem >= 0 && ls.rep_elem >= 0) {
      ls.kind = SideKind::inner;
      dom.inner_sides.push_back(idx);
    } else {
      ls.kind = SideKind::mpi;
      auto it = neighbor_of.find(gid);
      if (it == neighbor_of.end()) throw MeshError("side " + std::to_string(gid) + " crosses ranks but has no neighbour");
      ls.neighbor = it->second;
      ls.prim_loc = s.primary.loc_side;
      if (ls.rep_elem < 0) ls.rep_loc = s.replica.loc_side;
      dom.mpi_sides.push_back(idx);
    }
    dom.sides.push_back(ls);
  }

  dom.gather.resize(dom.n_elems);
  for (int e = 0; e < dom.n_elems; ++e) {
    const int ge = part.elem_begin + e;
    std::array<GatherEntry, kNumLocSides> g;
    for (int l = 0; l < kNumLocSides; ++l) {
      const int gid = mesh.elem_sides[ge][l];
      const bool primary = mesh.is_primary(ge, l);
      g[l] = {local_of.at(gid), l, primary ? 0 : mesh.sides[gid].orientation, primary};
    }
    std::sort(g.begin(), g.end(), [&](const GatherEntry& a, const GatherEntry& b) {
      if (a.side != b.side) return a.side < b.side;
      return a.primary && !b.primary;
    });
    dom.gather[e] = g;
  }

  for (const auto& nb : part.neighbors) {
    NeighborLink link;
    link.rank = nb.rank;
    for (int gid : nb.sides) {
      const int idx = local_of.at(gid);
      (dom.sides[idx].local_primary() ? link.primary_sides : link.replica_sides).push_back(idx);
    }
    dom.neighbors.push_back(std::move(link));
  }
  return dom;
}

RankDomain RankDomain::serial(const Discretization& disc) {
  Partition p;
  p.rank = 0;
  p.elem_begin = 0;
  p.elem_end = disc.mesh.n_elems;
  return build(disc, p);
}

void RankData::allocate(const Discretization& disc, const RankDomain& dom) {
  const size_t nn = disc.nn();
  const size_t nf = disc.nf();
  const size_t ne = dom.n_elems;
  const size_t ns = dom.sides.size();
  prim.assign(ne * nn * kNumPrim, 0.0);
  alpha.assign(ne, 0.0);
  UL.assign(ns * nf * kNumVars, 0.0);
  UR.assign(ns * nf * kNumVars, 0.0);
  flux.assign(ns * nf * kNumVars, 0.0);
  grad.assign(ne * nn * kNumGrad, 0.0);
  wstar.assign(ns * nf * kNumLifted, 0.0);
  lift_flux.assign(ns * nf * kNumGrad, 0.0);
  gL.assign(ns * nf * kNumGrad, 0.0);
  gR.assign(ns * nf * kNumGrad, 0.0);
}

void ElementScratch::ensure(int nn) {
  const size_t need = static_cast<size_t>(nn) * 16;
  if (a.size() < need) {
    a.assign(need, 0.0);
    b.assign(need, 0.0);
    c.assign(need, 0.0);
    d.assign(need, 0.0);
  }
}

namespace kernels {

namespace {

// out[node] += sum_a Dm(m, a) F[node(dir, a)] along every line of direction dir.
// Lines of one direction are processed together as contiguous blocks.
void add_line_derivative(const Matrix& Dm, int dir, int n, const double* F, int nc, double* out) {
  const int stride = dir == 0 ? 1 : (dir == 1 ? n : n * n);
  const int blk = stride * nc;
  const int outer = (n * n) / stride;
  double s[kMaxNodes1D * kMaxNodes1D * kNumGrad];
  for (int o = 0; o < outer; ++o) {
    const double* Fo = F + static_cast<size_t>(o) * n * blk;
    double* Oo = out + static_cast<size_t>(o) * n * blk;
    for (int m = 0; m < n; ++m) {
      const double* drow = Dm.a.data() + static_cast<size_t>(m) * Dm.cols;
      for (int c = 0; c < blk; ++c) s[c] = drow[0] * Fo[c];
      for (int a = 1; a < n; ++a) {
        const double d = drow[a];
        const double* f = Fo + a * blk;
        for (int c = 0; c < blk; ++c) s[c] += d * f[c];
      }
      double* dst = Oo + m * blk;
      for (int c = 0; c < blk; ++c) dst[c] += s[c];
    }
  }
}

// Trace of an element field on local side loc, written in primary face order.
void trace(const Basis1D& b, const double* f, int nvar, int loc, int orientation, double* out) {
  const int n = b.n();
  const int N = b.N;
  const int axis = side_axis(loc);
  const bool lgl = b.node_type == NodeType::LGL;
  const std::vector<double>& l = (loc % 2) ? b.l_plus : b.l_minus;
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      const auto pq = orient_face(orientation, p, q, N);
      double* o = &out[(pq[1] * n + pq[0]) * nvar];
      const auto ijk = face_volume_index(loc, p, q, N);
      if (lgl) {
        const double* src = &f[((ijk[2] * n + ijk[1]) * n + ijk[0]) * nvar];
        for (int v = 0; v < nvar; ++v) o[v] = src[v];
        continue;
      }
      for (int v = 0; v < nvar; ++v) o[v] = 0.0;
      for (int m = 0; m < n; ++m) {
        int r[3] = {ijk[0], ijk[1], ijk[2]};
        r[axis] = m;
        const double* src = &f[((r[2] * n + r[1]) * n + r[0]) * nvar];
        for (int v = 0; v < nvar; ++v) o[v] += l[m] * src[v];
      }
    }
}

// Adds the surface contribution of one locSide to an element.
void surface_contribution(const Basis1D& b, const double* side_flux, int nvar, int loc, int orientation,
                          bool primary, double* out) {
  const int n = b.n();
  const int N = b.N;
  const int axis = side_axis(loc);
  const bool lgl = b.node_type == NodeType::LGL;
  const std::vector<double>& lh = (loc % 2) ? b.lhat_plus : b.lhat_minus;
  const double sign = primary ? 1.0 : -1.0;
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      const auto pq = orient_face(orientation, p, q, N);
      const double* f = &side_flux[(pq[1] * n + pq[0]) * nvar];
      const auto ijk = face_volume_index(loc, p, q, N);
      const int m0 = lgl ? ijk[axis] : 0;
      const int m1 = lgl ? ijk[axis] + 1 : n;
      for (int m = m0; m < m1; ++m) {
        int r[3] = {ijk[0], ijk[1], ijk[2]};
        r[axis] = m;
        double* o = &out[((r[2] * n + r[1]) * n + r[0]) * nvar];
        for (int v = 0; v < nvar; ++v) o[v] += lh[m] * (sign * f[v]);
      }
    }
}

[[noreturn]] void inadmissible_node(const char* where, int elem, int node, const double* u) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%s: inadmissible state in element %d node %d (rho=%.6g, mom=(%.6g, %.6g, %.6g), rhoE=%.6g)", where,
                elem, node, u[0], u[1], u[2], u[3], u[4]);
  throw AdmissibilityError(buf);
}

[[noreturn]] void inadmissible_face(int gid, int node, const double* u) {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "riemann flux: inadmissible state on side %d face node %d (rho=%.6g, mom=(%.6g, %.6g, %.6g), "
                "rhoE=%.6g)",
                gid, node, u[0], u[1], u[2], u[3], u[4]);
  throw AdmissibilityError(buf);
}

void boundary_state(const Discretization& disc, const LocalSide& ls, int node, double t, double* u) {
  const double* x = &disc.geo.face_x[(static_cast<size_t>(ls.gid) * disc.nf() + node) * 3];
  const PrimitiveState P = disc.scheme.dirichlet[ls.bc_tag]({x[0], x[1], x[2]}, t);
  const detail::GasConstants gc(disc.gas);
  const double prim[kNumPrim] = {P.rho, P.vel[0], P.vel[1], P.vel[2], P.p, P.p / (P.rho * disc.gas.R)};
  detail::prim_to_cons_point(prim, u, gc);
}

inline bool finite_admissible(const double* prim) {
  return prim[0] > 0.0 && prim[4] > 0.0 && std::isfinite(prim[0]) && std::isfinite(prim[4]) &&
         std::isfinite(prim[1]) && std::isfinite(prim[2]) && std::isfinite(prim[3]);
}

}  // namespace

void cons_to_prim(const Discretization& disc, const RankDomain& dom, const double* U, RankData& data, int e0,
                  int e1) {
  const detail::GasConstants gc(disc.gas);
  const int nn = disc.nn();
  for (int e = e0; e < e1; ++e)
    for (int a = 0; a < nn; ++a) {
      const size_t idx = static_cast<size_t>(e) * nn + a;
      double* prim = &data.prim[idx * kNumPrim];
      detail::cons_to_prim_point(&U[idx * kNumVars], prim, gc);
      if (!finite_admissible(prim)) inadmissible_node("cons_to_prim", dom.elem_begin + e, a, &U[idx * kNumVars]);
    }
}

void prolong_to_face(const Discretization& disc, const RankDomain& dom, const double* U, RankData& data,
                     const std::vector<int>& sides, double t) {
  const size_t nn = disc.nn();
  const int nf = disc.nf();
  for (int s : sides) {
    const LocalSide& ls = dom.sides[s];
    double* ul = &data.UL[static_cast<size_t>(s) * nf * kNumVars];
    double* ur = &data.UR[static_cast<size_t>(s) * nf * kNumVars];
    if (ls.prim_elem >= 0) trace(disc.basis, &U[ls.prim_elem * nn * kNumVars], kNumVars, ls.prim_loc, 0, ul);
    if (ls.rep_elem >= 0)
      trace(disc.basis, &U[ls.rep_elem * nn * kNumVars], kNumVars, ls.rep_loc, ls.orientation, ur);
    if (ls.kind == SideKind::boundary)
      for (int a = 0; a < nf; ++a) boundary_state(disc, ls, a, t, &ur[a * kNumVars]);
  }
}

void prolong_gradients(const Discretization& disc, const RankDomain& dom, RankData& data,
                       const std::vector<int>& sides) {
  const size_t nn = disc.nn();
  const int nf = disc.nf();
  for (int s : sides) {
    const LocalSide& ls = dom.sides[s];
    double* gl = &data.gL[static_cast<size_t>(s) * nf * kNumGrad];
    double* gr = &data.gR[static_cast<size_t>(s) * nf * kNumGrad];
    if (ls.prim_elem >= 0) trace(disc.basis, &data.grad[ls.prim_elem * nn * kNumGrad], kNumGrad, ls.prim_loc, 0, gl);
    if (ls.rep_elem >= 0)
      trace(disc.basis, &data.grad[ls.rep_elem * nn * kNumGrad], kNumGrad, ls.rep_loc, ls.orientation, gr);
    if (ls.kind == SideKind::boundary) std::copy(gl, gl + nf * kNumGrad, gr);
  }
}

void lift_flux_from_trace(const Discretization& disc, const RankDomain& dom, RankData& data, int s,
                          const double* wstar) {
  const int nf = disc.nf();
  const int gid = dom.sides[s].gid;
  double* lf = &data.lift_flux[static_cast<size_t>(s) * nf * kNumGrad];
  double* ws = &data.wstar[static_cast<size_t>(s) * nf * kNumLifted];
  for (int a = 0; a < nf; ++a) {
    const double* nv = &disc.geo.face_n[(static_cast<size_t>(gid) * nf + a) * 3];
    const double sf = disc.geo.face_s[static_cast<size_t>(gid) * nf + a];
    for (int l = 0; l < kNumLifted; ++l) ws[a * kNumLifted + l] = wstar[a * kNumLifted + l];
    for (int d = 0; d < 3; ++d) {
      const double ns = nv[d] * sf;
      for (int l = 0; l < kNumLifted; ++l) lf[a * kNumGrad + d * kNumLifted + l] = wstar[a * kNumLifted + l] * ns;
    }
  }
}

void lift_fill_flux(const Discretization& disc, const RankDomain& dom, RankData& data,
                    const std::vector<int>& sides, double /*t*/) {
  const detail::GasConstants gc(disc.gas);
  const int nf = disc.nf();
  std::vector<double> w(static_cast<size_t>(nf) * kNumLifted);
  for (int s : sides) {
    const LocalSide& ls = dom.sides[s];
    if (!ls.local_primary()) continue;
    const double* ul = &data.UL[static_cast<size_t>(s) * nf * kNumVars];
    const double* ur = &data.UR[static_cast<size_t>(s) * nf * kNumVars];
    const bool bnd = ls.kind == SideKind::boundary;
    for (int a = 0; a < nf; ++a) {
      double pl[kNumPrim], pr[kNumPrim];
      detail::cons_to_prim_point(&ul[a * kNumVars], pl, gc);
      detail::cons_to_prim_point(&ur[a * kNumVars], pr, gc);
      for (int l = 0; l < kNumLifted; ++l) {
        const double wl = pl[l + 1 + (l == 3 ? 1 : 0)];
        const double wr = pr[l + 1 + (l == 3 ? 1 : 0)];
        w[a * kNumLifted + l] = bnd ? wr : 0.5 * (wl + wr);
      }
    }
    lift_flux_from_trace(disc, dom, data, s, w.data());
  }
}

void lift_volume(const Discretization& disc, const RankDomain& dom, RankData& data, int e0, int e1) {
  const int n = disc.n();
  const int nn = disc.nn();
  std::vector<double> G(static_cast<size_t>(nn) * kNumGrad);
  for (int e = e0; e < e1; ++e) {
    const size_t ge = static_cast<size_t>(dom.elem_begin + e);
    const double* prim = &data.prim[static_cast<size_t>(e) * nn * kNumPrim];
    const double* Ja = &disc.geo.Ja[ge * nn * 9];
    double* out = &data.grad[static_cast<size_t>(e) * nn * kNumGrad];
    std::fill(out, out + nn * kNumGrad, 0.0);
    for (int dir = 0; dir < 3; ++dir) {
      for (int a = 0; a < nn; ++a) {
        const double* p = &prim[a * kNumPrim];
        const double w[kNumLifted] = {p[1], p[2], p[3], p[5]};
        const double* ja = &Ja[a * 9 + dir * 3];
        for (int d = 0; d < 3; ++d)
          for (int l = 0; l < kNumLifted; ++l) G[a * kNumGrad + d * kNumLifted + l] = ja[d] * w[l];
      }
      add_line_derivative(disc.basis.Dhat, dir, n, G.data(), kNumGrad, out);
    }
  }
}

void lift_surface(const Discretization& disc, const RankDomain& dom, RankData& data, int e0, int e1) {
  surface_integral(disc, dom, data.lift_flux.data(), kNumGrad, data.grad.data(), e0, e1);
  apply_jacobian(disc, dom, data.grad.data(), kNumGrad, 1.0, e0, e1);
}

void fill_flux(const Discretization& disc, const RankDomain& dom, RankData& data, const std::vector<int>& sides,
               double /*t*/) {
  const detail::GasConstants gc(disc.gas);
  const int nf = disc.nf();
  const bool visc = disc.viscous();
  for (int s : sides) {
    const LocalSide& ls = dom.sides[s];
    if (!ls.local_primary()) continue;
    const size_t base = static_cast<size_t>(s) * nf;
    const size_t gbase = static_cast<size_t>(ls.gid) * nf;
    for (int a = 0; a < nf; ++a) {
      const double* ul = &data.UL[(base + a) * kNumVars];
      const double* ur = &data.UR[(base + a) * kNumVars];
      double pl[kNumPrim], pr[kNumPrim];
      detail::cons_to_prim_point(ul, pl, gc);
      detail::cons_to_prim_point(ur, pr, gc);
      if (!finite_admissible(pl)) inadmissible_face(ls.gid, a, ul);
      if (!finite_admissible(pr)) inadmissible_face(ls.gid, a, ur);
      const double* nv = &disc.geo.face_n[(gbase + a) * 3];
      const double sf = disc.geo.face_s[gbase + a];
      double f[kNumVars];
      detail::riemann_point(disc.scheme.riemann, ul, pl, ur, pr, nv, gc, f);
      if (visc) {
        double fvl[15], fvr[15];
        const double mul = detail::viscosity_point(pl[5], gc);
        const double mur = detail::viscosity_point(pr[5], gc);
        detail::viscous_flux_point(pl, &data.gL[(base + a) * kNumGrad], mul, mul * gc.cp_over_Pr, fvl);
        detail::viscous_flux_point(pr, &data.gR[(base + a) * kNumGrad], mur, mur * gc.cp_over_Pr, fvr);
        for (int v = 1; v < kNumVars; ++v) {
          const double fl = fvl[v] * nv[0] + fvl[5 + v] * nv[1] + fvl[10 + v] * nv[2];
          const double fr = fvr[v] * nv[0] + fvr[5 + v] * nv[1] + fvr[10 + v] * nv[2];
          f[v] += 0.5 * (fl + fr);
        }
      }
      double* out = &data.flux[(base + a) * kNumVars];
      for (int v = 0; v < kNumVars; ++v) out[v] = f[v] * sf;
    }
  }
}

void vol_int_standard(const Discretization& disc, const double* prim, const double* U, const double* Ja,
                      double* out, ElementScratch& scratch) {
  const int n = disc.n();
  const int nn = disc.nn();
  scratch.ensure(nn);
  double* F = scratch.a.data();
  for (int dir = 0; dir < 3; ++dir) {
    for (int a = 0; a < nn; ++a) detail::euler_flux_dot(&U[a * kNumVars], &prim[a * kNumPrim], &Ja[a * 9 + dir * 3],
                                                         &F[a * kNumVars]);
    add_line_derivative(disc.basis.Dhat, dir, n, F, kNumVars, out);
  }
}

namespace {

// Symmetric pair sweep over all lines of one direction. Arrays are indexed
// [m * nf + line]; the innermost loop runs over lines and vectorizes.
void split_pairs(int n, int nf, const Matrix& DV, const double* __restrict rho, const double* __restrict u,
                 const double* __restrict v, const double* __restrict w, const double* __restrict p,
                 const double* __restrict h, const double* __restrict m0, const double* __restrict m1,
                 const double* __restrict m2, double* __restrict R0, double* __restrict R1, double* __restrict R2,
                 double* __restrict R3, double* __restrict R4) {
  for (int i = 0; i < n; ++i) {
    const int oi = i * nf;
    {
      const double c = DV(i, i);
      for (int L = 0; L < nf; ++L) {
        const int x = oi + L;
        const double q = u[x] * m0[x] + v[x] * m1[x] + w[x] * m2[x];
        const double mf = rho[x] * q;
        R0[x] += c * mf;
        R1[x] += c * (mf * u[x] + p[x] * m0[x]);
        R2[x] += c * (mf * v[x] + p[x] * m1[x]);
        R3[x] += c * (mf * w[x] + p[x] * m2[x]);
        R4[x] += c * (mf * h[x]);
      }
    }
    for (int a = i + 1; a < n; ++a) {
      const int oa = a * nf;
      const double cia = DV(i, a);
      const double cai = DV(a, i);
      for (int L = 0; L < nf; ++L) {
        const int x = oi + L;
        const int y = oa + L;
        const double rb = 0.5 * (rho[x] + rho[y]);
        const double ub = 0.5 * (u[x] + u[y]);
        const double vb = 0.5 * (v[x] + v[y]);
        const double wb = 0.5 * (w[x] + w[y]);
        const double pb = 0.5 * (p[x] + p[y]);
        const double hb = 0.5 * (h[x] + h[y]);
        const double j0 = 0.5 * (m0[x] + m0[y]);
        const double j1 = 0.5 * (m1[x] + m1[y]);
        const double j2 = 0.5 * (m2[x] + m2[y]);
        const double mf = rb * (ub * j0 + vb * j1 + wb * j2);
        const double f0 = mf;
        const double f1 = mf * ub + pb * j0;
        const double f2 = mf * vb + pb * j1;
        const double f3 = mf * wb + pb * j2;
        const double f4 = mf * hb;
        R0[x] += cia * f0;
        R1[x] += cia * f1;
        R2[x] += cia * f2;
        R3[x] += cia * f3;
        R4[x] += cia * f4;
        R0[y] += cai * f0;
        R1[y] += cai * f1;
        R2[y] += cai * f2;
        R3[y] += cai * f3;
        R4[y] += cai * f4;
      }
    }
  }
}

}  // namespace

void vol_int_split(const Discretization& disc, const double* prim, const double* Ja, double* out,
                   ElementScratch& scratch) {
  const int n = disc.n();
  const int nn = disc.nn();
  const int nf = disc.nf();
  scratch.ensure(nn);
  const detail::GasConstants gc(disc.gas);
  double* T = scratch.a.data();  // 9 arrays of nn
  double* R = scratch.b.data();  // 5 arrays of nn
  double* H = scratch.c.data();  // enthalpy per node
  for (int a = 0; a < nn; ++a) H[a] = detail::enthalpy(&prim[a * kNumPrim], gc);
  for (int dir = 0; dir < 3; ++dir) {
    for (int m = 0; m < n; ++m)
      for (int L = 0; L < nf; ++L) {
        const int node = line_node(dir, m, L, n);
        const int x = m * nf + L;
        const double* pr = &prim[node * kNumPrim];
        T[0 * nn + x] = pr[0];
        T[1 * nn + x] = pr[1];
        T[2 * nn + x] = pr[2];
        T[3 * nn + x] = pr[3];
        T[4 * nn + x] = pr[4];
        T[5 * nn + x] = H[node];
        T[6 * nn + x] = Ja[node * 9 + dir * 3 + 0];
        T[7 * nn + x] = Ja[node * 9 + dir * 3 + 1];
        T[8 * nn + x] = Ja[node * 9 + dir * 3 + 2];
      }
    std::fill(R, R + 5 * nn, 0.0);
    split_pairs(n, nf, disc.basis.DVolSurf, T, T + nn, T + 2 * nn, T + 3 * nn, T + 4 * nn, T + 5 * nn, T + 6 * nn,
                T + 7 * nn, T + 8 * nn, R, R + nn, R + 2 * nn, R + 3 * nn, R + 4 * nn);
    for (int m = 0; m < n; ++m)
      for (int L = 0; L < nf; ++L) {
        const int node = line_node(dir, m, L, n);
        const int x = m * nf + L;
        for (int v = 0; v < kNumVars; ++v) out[node * kNumVars + v] += R[v * nn + x];
      }
  }
}

void vol_int_viscous(const Discretization& disc, const double* prim, const double* grad, const double* Ja,
                     double* out, ElementScratch& scratch) {
  const int n = disc.n();
  const int nn = disc.nn();
  scratch.ensure(nn);
  const detail::GasConstants gc(disc.gas);
  double* Fv = scratch.c.data();  // nn x 15
  double* G = scratch.d.data();   // nn x 5
  for (int a = 0; a < nn; ++a) {
    const double* pr = &prim[a * kNumPrim];
    const double mu = detail::viscosity_point(pr[5], gc);
    detail::viscous_flux_point(pr, &grad[a * kNumGrad], mu, mu * gc.cp_over_Pr, &Fv[a * 15]);
  }
  for (int dir = 0; dir < 3; ++dir) {
    for (int a = 0; a < nn; ++a) {
      const double* ja = &Ja[a * 9 + dir * 3];
      const double* f = &Fv[a * 15];
      for (int v = 0; v < kNumVars; ++v) G[a * kNumVars + v] = ja[0] * f[v] + ja[1] * f[5 + v] + ja[2] * f[10 + v];
    }
    add_line_derivative(disc.basis.Dhat, dir, n, G, kNumVars, out);
  }
}

void volume_integral(const Discretization& disc, const RankDomain& dom, const double* U, RankData& data,
                     double* Ut, int e0, int e1, ElementScratch& scratch) {
  const int nn = disc.nn();
  const size_t ne5 = static_cast<size_t>(nn) * kNumVars;
  const bool sc = disc.scheme.shock_capturing;
  std::vector<double> conv(sc ? ne5 : 0), fv(sc ? ne5 : 0);
  for (int e = e0; e < e1; ++e) {
    const size_t ge = static_cast<size_t>(dom.elem_begin + e);
    const double* Ue = &U[e * ne5];
    const double* pe = &data.prim[static_cast<size_t>(e) * nn * kNumPrim];
    const double* Ja = &disc.geo.Ja[ge * nn * 9];
    double* out = &Ut[e * ne5];
    std::fill(out, out + ne5, 0.0);
    double* target = sc ? conv.data() : out;
    if (sc) std::fill(conv.begin(), conv.end(), 0.0);
    if (disc.scheme.split) {
      vol_int_split(disc, pe, Ja, target, scratch);
    } else {
      vol_int_standard(disc, pe, Ue, Ja, target, scratch);
    }
    if (sc) {
      const double alpha = indicator_alpha(disc.basis, Ue, disc.gas, disc.scheme.indicator);
      data.alpha[e] = alpha;
      if (alpha > 0.0) {
        std::fill(fv.begin(), fv.end(), 0.0);
        const int N = disc.N();
        fv_subcell_volume(disc.basis, Ue, pe, &disc.geo.fv_metric[ge * 3 * N * disc.nf() * 3], disc.gas,
                          disc.scheme.riemann, fv.data());
        blend(conv.data(), fv.data(), alpha, out, static_cast<int>(ne5));
      } else {
        std::copy(conv.begin(), conv.end(), out);
      }
    }
    if (disc.viscous()) vol_int_viscous(disc, pe, &data.grad[static_cast<size_t>(e) * nn * kNumGrad], Ja, out, scratch);
  }
}

void surface_integral(const Discretization& disc, const RankDomain& dom, const double* face_flux, int nvar,
                      double* out, int e0, int e1) {
  const size_t nn = disc.nn();
  const size_t nf = disc.nf();
  for (int e = e0; e < e1; ++e)
    for (const GatherEntry& g : dom.gather[e])
      surface_contribution(disc.basis, &face_flux[g.side * nf * nvar], nvar, g.loc, g.orientation, g.primary,
                           &out[e * nn * nvar]);
}

void surface_integral_scatter(const Discretization& disc, const RankDomain& dom, const double* face_flux, int nvar,
                              double* out) {
  const size_t nn = disc.nn();
  const size_t nf = disc.nf();
  for (size_t s = 0; s < dom.sides.size(); ++s) {
    const LocalSide& ls = dom.sides[s];
    const double* f = &face_flux[s * nf * nvar];
    if (ls.prim_elem >= 0) surface_contribution(disc.basis, f, nvar, ls.prim_loc, 0, true, &out[ls.prim_elem * nn * nvar]);
    if (ls.rep_elem >= 0)
      surface_contribution(disc.basis, f, nvar, ls.rep_loc, ls.orientation, false, &out[ls.rep_elem * nn * nvar]);
  }
}

void apply_jacobian(const Discretization& disc, const RankDomain& dom, double* Ut, int nvar, double scale, int e0,
                    int e1) {
  const size_t nn = disc.nn();
  for (int e = e0; e < e1; ++e) {
    const double* sJ = &disc.geo.sJ[(dom.elem_begin + e) * nn];
    double* u = &Ut[e * nn * nvar];
    for (size_t a = 0; a < nn; ++a) {
      const double f = scale * sJ[a];
      for (int v = 0; v < nvar; ++v) u[a * nvar + v] *= f;
    }
  }
}

void add_source(const Discretization& disc, const RankDomain& dom, double* Ut, double t, int e0, int e1) {
  if (!disc.scheme.source) return;
  const size_t nn = disc.nn();
  double S[kNumVars];
  for (int e = e0; e < e1; ++e)
    for (size_t a = 0; a < nn; ++a) {
      const double* x = &disc.geo.x[((dom.elem_begin + e) * nn + a) * 3];
      disc.scheme.source({x[0], x[1], x[2]}, t, S);
      double* u = &Ut[(e * nn + a) * kNumVars];
      for (int v = 0; v < kNumVars; ++v) u[v] += S[v];
    }
}

}  // namespace kernels

struct DGOperator::Impl {
  const Discretization& disc;
  RankDomain dom;
  RankData data;
  ElementScratch scratch;
  std::vector<int> all_sides;

  explicit Impl(const Discretization& d) : disc(d), dom(RankDomain::serial(d)) {
    data.allocate(disc, dom);
    for (size_t s = 0; s < dom.sides.size(); ++s) all_sides.push_back(static_cast<int>(s));
  }

  void lifting(const double* U, double t) {
    const int ne = dom.n_elems;
    kernels::lift_fill_flux(disc, dom, data, all_sides, t);
    kernels::lift_volume(disc, dom, data, 0, ne);
    kernels::lift_surface(disc, dom, data, 0, ne);
    kernels::prolong_gradients(disc, dom, data, all_sides);
    (void)U;
  }
};

DGOperator::DGOperator(const Discretization& disc) : impl_(std::make_unique<Impl>(disc)) {}
DGOperator::~DGOperator() = default;

void DGOperator::time_derivative(const std::vector<double>& U, double t, std::vector<double>& Ut) {
  Impl& m = *impl_;
  const auto& disc = m.disc;
  const int ne = m.dom.n_elems;
  if (U.size() != disc.field_size()) throw std::invalid_argument("time_derivative: field size mismatch");
  Ut.resize(U.size());
  kernels::cons_to_prim(disc, m.dom, U.data(), m.data, 0, ne);
  kernels::prolong_to_face(disc, m.dom, U.data(), m.data, m.all_sides, t);
  if (disc.viscous()) m.lifting(U.data(), t);
  kernels::fill_flux(disc, m.dom, m.data, m.all_sides, t);
  kernels::volume_integral(disc, m.dom, U.data(), m.data, Ut.data(), 0, ne, m.scratch);
  kernels::surface_integral(disc, m.dom, m.data.flux.data(), kNumVars, Ut.data(), 0, ne);
  kernels::apply_jacobian(disc, m.dom, Ut.data(), kNumVars, -1.0, 0, ne);
  kernels::add_source(disc, m.dom, Ut.data(), t, 0, ne);
}

std::vector<double> DGOperator::compute_lifting(const std::vector<double>& U, double t) {
  Impl& m = *impl_;
  const int ne = m.dom.n_elems;
  kernels::cons_to_prim(m.disc, m.dom, U.data(), m.data, 0, ne);
  kernels::prolong_to_face(m.disc, m.dom, U.data(), m.data, m.all_sides, t);
  m.lifting(U.data(), t);
  return m.data.grad;
}

const std::vector<double>& DGOperator::alpha() const { return impl_->data.alpha; }
const RankDomain& DGOperator::domain() const { return impl_->dom; }

}  // namespace hexdg
