#pragma once

// Semi-discrete DGSEM operator: Ut = -1/J [ volume integral + surface integral ] + S.
//
// Field layouts (n = N + 1, nn = n^3, nf = n^2, node = (k * n + j) * n + i):
//   ConservedField  U[(e * nn + node) * 5 + var]
//   primitives      prim[(e * nn + node) * 6 + var]      (rho, u, v, w, p, T)
//   gradients       grad[(e * nn + node) * 12 + d * 4 + l] (d = x, y, z; l = u, v, w, T)
//   face arrays     X[(side * nf + face_node) * nvar + var], face nodes in the
//                   primary element's face frame (p fastest).

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hexdg/basis.hpp"
#include "hexdg/equations.hpp"
#include "hexdg/geometry.hpp"
#include "hexdg/mesh.hpp"
#include "hexdg/shock_capturing.hpp"

namespace hexdg {

inline constexpr int kNumGrad = 3 * kNumLifted;
/// Largest supported number of nodes per direction (N <= 15).
inline constexpr int kMaxNodes1D = 16;

using BoundaryState = std::function<PrimitiveState(const Vec3& x, double t)>;
using SourceTerm = std::function<void(const Vec3& x, double t, double* S)>;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SchemeConfig {
  bool split = false;
  RiemannSolverKind riemann = RiemannSolverKind::llf;
  bool shock_capturing = false;
  IndicatorConfig indicator;
  /// Dirichlet states indexed by boundary tag (1..6).
  std::array<BoundaryState, 7> dirichlet;
  SourceTerm source;
};

class Discretization {
 public:
  Discretization(Mesh mesh, int N, NodeType node_type, GasProperties gas, SchemeConfig scheme);

  Mesh mesh;
  Basis1D basis;
  Geometry geo;
  GasProperties gas;
  SchemeConfig scheme;

  int N() const { return basis.N; }
  int n() const { return basis.n(); }
  int nn() const { return basis.n() * basis.n() * basis.n(); }
  int nf() const { return basis.n() * basis.n(); }
  bool viscous() const { return gas.viscous(); }
  size_t field_size() const { return static_cast<size_t>(mesh.n_elems) * nn() * kNumVars; }
  long long n_dof() const { return static_cast<long long>(mesh.n_elems) * nn(); }
};

enum class SideKind { inner, boundary, mpi };

struct LocalSide {
  int gid = -1;
  SideKind kind = SideKind::inner;
  int prim_elem = -1;  // local element index; -1 when owned by another rank
  int prim_loc = -1;
  int rep_elem = -1;  // local element index; -1 when remote or on a boundary
  int rep_loc = -1;
  int orientation = 0;
  int bc_tag = 0;
  int neighbor = -1;
  bool local_primary() const { return prim_elem >= 0; }
};

/// One locSide contribution of an element's surface integral.
struct GatherEntry {
  int side = -1;  // local side index
  int loc = -1;
  int orientation = 0;  // 0 for the primary element
  bool primary = true;
};

struct NeighborLink {
  int rank = -1;
  /// Local side indices (ascending global id) where this rank holds the primary.
  std::vector<int> primary_sides;
  /// Local side indices (ascending global id) where this rank holds the replica.
  std::vector<int> replica_sides;
};

struct RankDomain {
  int rank = 0;
  int elem_begin = 0;
  int n_elems = 0;
  std::vector<LocalSide> sides;  // ascending global id
  std::vector<int> inner_sides;
  std::vector<int> boundary_sides;
  std::vector<int> mpi_sides;
  /// Per local element: its six locSides ordered by (global side id, primary first).
  std::vector<std::array<GatherEntry, kNumLocSides>> gather;
  std::vector<NeighborLink> neighbors;

  static RankDomain build(const Discretization& disc, const Partition& part);
  /// Single-rank domain covering the whole mesh.
  static RankDomain serial(const Discretization& disc);
};

/// Rank-local work arrays.
struct RankData {
  std::vector<double> prim;
  std::vector<double> grad;
  std::vector<double> alpha;
  std::vector<double> UL, UR, flux;
  std::vector<double> wstar;
  std::vector<double> lift_flux;
  std::vector<double> gL, gR;

  void allocate(const Discretization& disc, const RankDomain& dom);
};

/// Per-thread scratch for the element kernels.
struct ElementScratch {
  std::vector<double> a, b, c, d;
  void ensure(int nn);
};

namespace kernels {

/// Throws AdmissibilityError naming the global element and node.
void cons_to_prim(const Discretization& disc, const RankDomain& dom, const double* U, RankData& data, int e0,
                  int e1);

/// Traces of U on the listed sides (both local roles) plus Dirichlet states.
void prolong_to_face(const Discretization& disc, const RankDomain& dom, const double* U, RankData& data,
                     const std::vector<int>& sides, double t);
void prolong_gradients(const Discretization& disc, const RankDomain& dom, RankData& data,
                       const std::vector<int>& sides);

/// Central lifting flux w* n_d s on the listed sides whose primary is local.
void lift_fill_flux(const Discretization& disc, const RankDomain& dom, RankData& data,
                    const std::vector<int>& sides, double t);
/// Expands a received w* (n_lift values per face node) into the lifting flux.
void lift_flux_from_trace(const Discretization& disc, const RankDomain& dom, RankData& data, int side,
                          const double* wstar);
void lift_volume(const Discretization& disc, const RankDomain& dom, RankData& data, int e0, int e1);
void lift_surface(const Discretization& disc, const RankDomain& dom, RankData& data, int e0, int e1);

/// Common flux f* s on the listed sides whose primary is local.
void fill_flux(const Discretization& disc, const RankDomain& dom, RankData& data, const std::vector<int>& sides,
               double t);

/// Volume integral (convective standard or split, blended with FV when shock
/// capturing is on, plus viscous) written to Ut for elements [e0, e1).
void volume_integral(const Discretization& disc, const RankDomain& dom, const double* U, RankData& data,
                     double* Ut, int e0, int e1, ElementScratch& scratch);

/// Surface integral by per-DOF gathering over the six locSides.
void surface_integral(const Discretization& disc, const RankDomain& dom, const double* face_flux, int nvar,
                      double* out, int e0, int e1);
/// Reference formulation: loop over sides and scatter into both elements.
void surface_integral_scatter(const Discretization& disc, const RankDomain& dom, const double* face_flux, int nvar,
                              double* out);

/// Ut <- scale / J * Ut for elements [e0, e1) (scale = -1 for the operator).
void apply_jacobian(const Discretization& disc, const RankDomain& dom, double* Ut, int nvar, double scale, int e0,
                    int e1);
void add_source(const Discretization& disc, const RankDomain& dom, double* Ut, double t, int e0, int e1);

/// Convective-only volume terms (no Jacobian, no surface) for one element.
void vol_int_standard(const Discretization& disc, const double* prim_elem, const double* U_elem,
                      const double* Ja_elem, double* out, ElementScratch& scratch);
void vol_int_split(const Discretization& disc, const double* prim_elem, const double* Ja_elem, double* out,
                   ElementScratch& scratch);
void vol_int_viscous(const Discretization& disc, const double* prim_elem, const double* grad_elem,
                     const double* Ja_elem, double* out, ElementScratch& scratch);

}  // namespace kernels

/// Single-rank convenience wrapper around the full operator pipeline.
class DGOperator {
 public:
  explicit DGOperator(const Discretization& disc);
  ~DGOperator();
  DGOperator(const DGOperator&) = delete;
  DGOperator& operator=(const DGOperator&) = delete;

  /// Ut = L(U, t).
  void time_derivative(const std::vector<double>& U, double t, std::vector<double>& Ut);
  /// Lifted gradients of U (runs the lifting pipeline even for inviscid gas).
  std::vector<double> compute_lifting(const std::vector<double>& U, double t);
  /// Blending factors of the last evaluation.
  const std::vector<double>& alpha() const;
  const RankDomain& domain() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hexdg
