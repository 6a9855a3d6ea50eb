#pragma once

// Metric terms of the isoparametric mapping evaluated on the solution nodes.

#include <vector>

#include "hexdg/basis.hpp"
#include "hexdg/mesh.hpp"

namespace hexdg {

struct Geometry {
  int N = 0;
  int n_elems = 0;
  int n_sides = 0;
  /// Physical node positions x[(e * nn + node) * 3 + d].
  std::vector<double> x;
  std::vector<double> J;
  std::vector<double> sJ;  // 1 / J
  /// Contravariant vectors Ja[((e * nn + node) * 3 + i) * 3 + d] = (J a^i)_d.
  std::vector<double> Ja;
  /// Per side and primary-frame face node: unit normal (primary outward),
  /// surface element and position.
  std::vector<double> face_n;
  std::vector<double> face_s;
  std::vector<double> face_x;
  /// The same quantities as computed independently from the replica element,
  /// stored in primary face ordering with the replica's outward normal.
  std::vector<double> face_n_replica;
  std::vector<double> face_s_replica;
  /// Subcell interface metric vectors (LGL only):
  /// fv_metric[(((e * 3 + dir) * N + m) * nf + line) * 3 + d] for interfaces
  /// m + 1/2, m = 0..N-1, between nodes m and m+1 along the line.
  std::vector<double> fv_metric;

  int n() const { return N + 1; }
  int nn() const { return (N + 1) * (N + 1) * (N + 1); }
  int nf() const { return (N + 1) * (N + 1); }
};

/// Line index inside an element for direction dir, from the two remaining
/// indices in increasing axis order: line = b * n + a.
inline int line_index(int dir, int i, int j, int k, int n) {
  switch (dir) {
    case 0:
      return k * n + j;
    case 1:
      return k * n + i;
    default:
      return j * n + i;
  }
}

/// Inverse of line_index: volume node of position m on the given line.
inline int line_node(int dir, int m, int line, int n) {
  switch (dir) {
    case 0:
      return line * n + m;
    case 1:
      return (line / n) * n * n + m * n + line % n;
    default:
      return m * n * n + line;
  }
}

/// Builds the geometry for a mesh whose mapping degree equals the basis degree.
/// Throws MeshError if J <= 0 at any solution node.
Geometry compute_metrics(const Mesh& mesh, const Basis1D& basis, bool subcell_metrics = false);

/// max over nodes of |sum_i d(Ja^i_d)/d xi^i| using the basis differentiation matrix.
double metric_identity_residual(const Geometry& geo, const Basis1D& basis);

}  // namespace hexdg
