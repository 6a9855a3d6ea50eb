#pragma once

// Hexahedral box meshes, side connectivity with orientation codes, and
// space-filling-curve partitioning.
//
// Local side numbering: 0 = xi-, 1 = xi+, 2 = eta-, 3 = eta+, 4 = zeta-, 5 = zeta+.
// Face coordinates (p, q) per local side: xi faces (j, k), eta faces (i, k),
// zeta faces (i, j).
//
// Orientation code (maps primary face coordinates to replica face coordinates,
// and is its own inverse):
//   0: (p, q)
//   1: (N - p, q)
//   2: (p, N - q)
//   3: (N - p, N - q)
//
// Boundary tags: 0 = interior or periodic, 1..6 = x-, x+, y-, y+, z-, z+.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexdg/equations.hpp"

namespace hexdg {

inline constexpr int kNumLocSides = 6;

struct SideRef {
  int elem = -1;
  int loc_side = -1;
};

struct Side {
  SideRef primary;
  SideRef replica;  // elem == -1 on physical boundaries
  int orientation = 0;
  int bc_tag = 0;

  bool is_boundary() const { return replica.elem < 0; }
};

struct BoxSpec {
  int nx = 1, ny = 1, nz = 1;
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};
  std::array<bool, 3> periodic{true, true, true};
  /// Give neighbouring elements different reference frames so that every
  /// orientation code occurs.
  bool mixed_frames = false;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Mesh {
  /// Degree of the isoparametric mapping; geometry nodes are LGL.
  int N = 1;
  int n_elems = 0;
  /// Mapping nodes: coords[((e * n + k) * n + j) * n + i) * 3 + d], n = N + 1.
  std::vector<double> coords;
  /// Cartesian cell index of each element (drives the space-filling curve).
  std::vector<std::array<int, 3>> grid_index;
  std::vector<Side> sides;
  /// elem_sides[e][loc_side] = global side id.
  std::vector<std::array<int, kNumLocSides>> elem_sides;
  BoxSpec box;

  int nodes_per_elem() const { return (N + 1) * (N + 1) * (N + 1); }
  int n_sides() const { return static_cast<int>(sides.size()); }
  bool is_primary(int e, int loc) const {
    const Side& s = sides[elem_sides[e][loc]];
    return s.primary.elem == e && s.primary.loc_side == loc;
  }
};

Mesh generate_box_mesh(const BoxSpec& spec, int N);

/// x_d += amplitude * L_d * sin(2 pi xh) sin(2 pi yh) sin(2 pi zh) with
/// normalized box coordinates; throws MeshError naming the element on fold-over.
Mesh curve_mesh(const Mesh& mesh, double amplitude);

/// Face coordinates (p, q) of the primary mapped into the replica's frame.
std::array<int, 2> orient_face(int orientation, int p, int q, int N);

/// Volume index (i, j, k) of face node (p, q) on the given local side.
std::array<int, 3> face_volume_index(int loc_side, int p, int q, int N);

/// Volume index influenced by primary-frame face node (p, q) as seen from an
/// element attached through (loc_side, orientation).
std::array<int, 3> side_mapping(int loc_side, int orientation, int p, int q, int N);

/// Inverse of side_mapping restricted to the face layer: volume index on the
/// face back to primary-frame face coordinates.
std::array<int, 2> side_mapping_inverse(int loc_side, int orientation, int i, int j, int k, int N);

/// Reference axis (0, 1, 2) and outward sign (-1, +1) of a local side.
inline int side_axis(int loc_side) { return loc_side / 2; }
inline int side_sign(int loc_side) { return (loc_side % 2) ? 1 : -1; }

std::uint64_t morton_key(int x, int y, int z);

struct NeighborSides {
  int rank = -1;
  /// Global side ids shared with this neighbour, ascending.
  std::vector<int> sides;
};

struct Partition {
  int rank = 0;
  /// Elements are stored in curve order, so each rank owns [elem_begin, elem_end).
  int elem_begin = 0;
  int elem_end = 0;
  std::vector<NeighborSides> neighbors;

  int n_elems() const { return elem_end - elem_begin; }
  bool owns(int e) const { return e >= elem_begin && e < elem_end; }
};

std::vector<Partition> partition_sfc(const Mesh& mesh, int n_ranks);
/// Contiguous ranges [cuts[r], cuts[r+1]); cuts runs from 0 to n_elems.
std::vector<Partition> partition_ranges(const Mesh& mesh, const std::vector<int>& cuts);

/// Rank owning element e under the given partitioning.
int owner_rank(const std::vector<Partition>& parts, int e);

void write_mesh_file(const std::string& path, const Mesh& mesh);
Mesh read_mesh_file(const std::string& path);

}  // namespace hexdg
