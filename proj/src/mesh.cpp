#include "hexdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hexdg/basis.hpp"

namespace hexdg {

namespace {

// Reference frames used for element orientation: sign of each reference axis
// relative to the aligned physical axis. All have positive determinant.
constexpr int kFrames[4][3] = {{1, 1, 1}, {-1, -1, 1}, {1, -1, -1}, {-1, 1, -1}};

int frame_of(const std::array<int, 3>& c, bool mixed) {
  if (!mixed) return 0;
  return (c[0] + 2 * c[1] + 3 * c[2] + c[0] * c[2]) % 4;
}

// Local side of the element with frame f that faces physical direction `axis`
// on the +/- end.
int loc_side_for(int f, int axis, bool plus_end) {
  const bool ref_plus = (kFrames[f][axis] > 0) == plus_end;
  return 2 * axis + (ref_plus ? 1 : 0);
}

}  // namespace

std::uint64_t morton_key(int x, int y, int z) {
  auto spread = [](std::uint64_t v) {
    std::uint64_t r = 0;
    for (int b = 0; b < 21; ++b) r |= ((v >> b) & 1u) << (3 * b);
    return r;
  };
  return spread(static_cast<std::uint64_t>(x)) | (spread(static_cast<std::uint64_t>(y)) << 1) |
         (spread(static_cast<std::uint64_t>(z)) << 2);
}

Mesh generate_box_mesh(const BoxSpec& spec, int N) {
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1) throw MeshError("box mesh: element counts must be >= 1");
  if (N < 1) throw MeshError("box mesh: geometry degree must be >= 1");
  for (int d = 0; d < 3; ++d)
    if (!(spec.hi[d] > spec.lo[d])) throw MeshError("box mesh: empty extent in direction " + std::to_string(d));

  const std::array<int, 3> counts{spec.nx, spec.ny, spec.nz};
  const int n_cells = spec.nx * spec.ny * spec.nz;

  std::vector<std::array<int, 3>> cells(n_cells);
  for (int cz = 0, c = 0; cz < spec.nz; ++cz)
    for (int cy = 0; cy < spec.ny; ++cy)
      for (int cx = 0; cx < spec.nx; ++cx, ++c) cells[c] = {cx, cy, cz};
  std::vector<int> order(n_cells);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return morton_key(cells[a][0], cells[a][1], cells[a][2]) < morton_key(cells[b][0], cells[b][1], cells[b][2]);
  });
  std::vector<int> elem_of_cell(n_cells);
  for (int e = 0; e < n_cells; ++e) elem_of_cell[order[e]] = e;
  auto cell_id = [&](int cx, int cy, int cz) { return (cz * spec.ny + cy) * spec.nx + cx; };

  Mesh m;
  m.N = N;
  m.n_elems = n_cells;
  m.box = spec;
  m.grid_index.resize(n_cells);
  m.elem_sides.assign(n_cells, {-1, -1, -1, -1, -1, -1});

  std::vector<double> xi, w;
  quadrature(N, NodeType::LGL, xi, w);
  const int n = N + 1;
  Vec3 h;
  for (int d = 0; d < 3; ++d) h[d] = (spec.hi[d] - spec.lo[d]) / counts[d];

  m.coords.resize(static_cast<size_t>(n_cells) * n * n * n * 3);
  std::vector<int> frame(n_cells);
  for (int e = 0; e < n_cells; ++e) {
    const auto c = cells[order[e]];
    m.grid_index[e] = c;
    frame[e] = frame_of(c, spec.mixed_frames);
    const int* s = kFrames[frame[e]];
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const int r[3] = {i, j, k};
          double* x = &m.coords[((((size_t)e * n + k) * n + j) * n + i) * 3];
          for (int d = 0; d < 3; ++d) {
            const double t = s[d] > 0 ? xi[r[d]] : xi[N - r[d]];
            x[d] = spec.lo[d] + h[d] * (c[d] + 0.5 * (t + 1.0));
          }
        }
  }

  auto add_side = [&](int eA, int locA, int eB, int locB, int tag) {
    Side s;
    s.bc_tag = tag;
    if (eB < 0) {
      s.primary = {eA, locA};
    } else {
      const bool a_first = eA < eB || (eA == eB && locA < locB);
      s.primary = a_first ? SideRef{eA, locA} : SideRef{eB, locB};
      s.replica = a_first ? SideRef{eB, locB} : SideRef{eA, locA};
      const int axis = side_axis(locA);
      int tang[2];
      for (int d = 0, t = 0; d < 3; ++d)
        if (d != axis) tang[t++] = d;
      const int* fp = kFrames[frame[s.primary.elem]];
      const int* fr = kFrames[frame[s.replica.elem]];
      s.orientation = (fp[tang[0]] != fr[tang[0]] ? 1 : 0) | (fp[tang[1]] != fr[tang[1]] ? 2 : 0);
    }
    const int id = static_cast<int>(m.sides.size());
    m.sides.push_back(s);
    m.elem_sides[eA][locA] = id;
    if (eB >= 0) m.elem_sides[eB][locB] = id;
  };

  for (int d = 0; d < 3; ++d) {
    for (int cz = 0; cz < spec.nz; ++cz)
      for (int cy = 0; cy < spec.ny; ++cy)
        for (int cx = 0; cx < spec.nx; ++cx) {
          std::array<int, 3> c{cx, cy, cz};
          const int e = elem_of_cell[cell_id(cx, cy, cz)];
          if (c[d] == 0 && !spec.periodic[d]) add_side(e, loc_side_for(frame[e], d, false), -1, -1, 2 * d + 1);
          const int locP = loc_side_for(frame[e], d, true);
          if (c[d] == counts[d] - 1 && !spec.periodic[d]) {
            add_side(e, locP, -1, -1, 2 * d + 2);
            continue;
          }
          std::array<int, 3> nb = c;
          nb[d] = (c[d] + 1) % counts[d];
          const int enb = elem_of_cell[cell_id(nb[0], nb[1], nb[2])];
          add_side(e, locP, enb, loc_side_for(frame[enb], d, false), 0);
        }
  }
  return m;
}

Mesh curve_mesh(const Mesh& mesh, double amplitude) {
  Mesh out = mesh;
  if (amplitude == 0.0) return out;
  const int n = mesh.N + 1;
  const auto& box = mesh.box;
  const double two_pi = 2.0 * std::numbers::pi;
  Vec3 L;
  for (int d = 0; d < 3; ++d) L[d] = box.hi[d] - box.lo[d];
  const size_t n_nodes = static_cast<size_t>(mesh.n_elems) * n * n * n;
  for (size_t a = 0; a < n_nodes; ++a) {
    double* x = &out.coords[a * 3];
    double s = 1.0;
    for (int d = 0; d < 3; ++d) s *= std::sin(two_pi * (x[d] - box.lo[d]) / L[d]);
    for (int d = 0; d < 3; ++d) x[d] += amplitude * L[d] * s;
  }

  const Basis1D b = build_basis(mesh.N, NodeType::LGL);
  for (int e = 0; e < mesh.n_elems; ++e) {
    const double* X = &out.coords[static_cast<size_t>(e) * n * n * n * 3];
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          double dx[3][3] = {};
          for (int a = 0; a < n; ++a) {
            const double* xa = &X[(((k * n + j) * n) + a) * 3];
            const double* xb = &X[(((k * n + a) * n) + i) * 3];
            const double* xc = &X[(((a * n + j) * n) + i) * 3];
            for (int d = 0; d < 3; ++d) {
              dx[d][0] += b.D(i, a) * xa[d];
              dx[d][1] += b.D(j, a) * xb[d];
              dx[d][2] += b.D(k, a) * xc[d];
            }
          }
          const double J = dx[0][0] * (dx[1][1] * dx[2][2] - dx[1][2] * dx[2][1]) -
                           dx[0][1] * (dx[1][0] * dx[2][2] - dx[1][2] * dx[2][0]) +
                           dx[0][2] * (dx[1][0] * dx[2][1] - dx[1][1] * dx[2][0]);
          if (!(J > 0.0)) {
            throw MeshError("curve_mesh: element " + std::to_string(e) + " folds over (J = " + std::to_string(J) +
                            " at node " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                            ")");
          }
        }
  }
  return out;
}

std::array<int, 2> orient_face(int orientation, int p, int q, int N) {
  if (orientation < 0 || orientation > 3) throw MeshError("invalid orientation code " + std::to_string(orientation));
  return {(orientation & 1) ? N - p : p, (orientation & 2) ? N - q : q};
}

std::array<int, 3> face_volume_index(int loc_side, int p, int q, int N) {
  const int m = (loc_side % 2) ? N : 0;
  switch (side_axis(loc_side)) {
    case 0:
      return {m, p, q};
    case 1:
      return {p, m, q};
    case 2:
      return {p, q, m};
  }
  throw MeshError("invalid local side " + std::to_string(loc_side));
}

std::array<int, 3> side_mapping(int loc_side, int orientation, int p, int q, int N) {
  const auto pq = orient_face(orientation, p, q, N);
  return face_volume_index(loc_side, pq[0], pq[1], N);
}

std::array<int, 2> side_mapping_inverse(int loc_side, int orientation, int i, int j, int k, int N) {
  int p = 0, q = 0;
  switch (side_axis(loc_side)) {
    case 0:
      p = j, q = k;
      break;
    case 1:
      p = i, q = k;
      break;
    case 2:
      p = i, q = j;
      break;
    default:
      throw MeshError("invalid local side " + std::to_string(loc_side));
  }
  return orient_face(orientation, p, q, N);
}

std::vector<Partition> partition_sfc(const Mesh& mesh, int n_ranks) {
  if (n_ranks < 1) throw MeshError("partition: need at least one rank");
  if (n_ranks > mesh.n_elems) {
    throw MeshError("partition: " + std::to_string(n_ranks) + " ranks exceed " + std::to_string(mesh.n_elems) +
                    " elements");
  }
  for (int e = 1; e < mesh.n_elems && !mesh.grid_index.empty(); ++e) {
    const auto& a = mesh.grid_index[e - 1];
    const auto& b = mesh.grid_index[e];
    if (morton_key(a[0], a[1], a[2]) > morton_key(b[0], b[1], b[2]))
      throw MeshError("partition: elements are not stored in curve order");
  }
  const int base = mesh.n_elems / n_ranks;
  const int rem = mesh.n_elems % n_ranks;
  std::vector<int> cuts{0};
  for (int r = 0; r < n_ranks; ++r) cuts.push_back(cuts.back() + base + (r < rem ? 1 : 0));
  return partition_ranges(mesh, cuts);
}

std::vector<Partition> partition_ranges(const Mesh& mesh, const std::vector<int>& cuts) {
  const int n_ranks = static_cast<int>(cuts.size()) - 1;
  if (n_ranks < 1 || cuts.front() != 0 || cuts.back() != mesh.n_elems)
    throw MeshError("partition: cuts must start at 0 and end at the element count");
  std::vector<Partition> parts(n_ranks);
  for (int r = 0; r < n_ranks; ++r) {
    if (cuts[r + 1] <= cuts[r]) throw MeshError("partition: rank " + std::to_string(r) + " owns no elements");
    parts[r].rank = r;
    parts[r].elem_begin = cuts[r];
    parts[r].elem_end = cuts[r + 1];
  }
  for (int s = 0; s < mesh.n_sides(); ++s) {
    const Side& side = mesh.sides[s];
    if (side.is_boundary()) continue;
    const int ra = owner_rank(parts, side.primary.elem);
    const int rb = owner_rank(parts, side.replica.elem);
    if (ra == rb) continue;
    for (auto [self, other] : {std::pair{ra, rb}, std::pair{rb, ra}}) {
      auto& nbs = parts[self].neighbors;
      auto it = std::find_if(nbs.begin(), nbs.end(), [other](const NeighborSides& x) { return x.rank == other; });
      if (it == nbs.end()) {
        nbs.push_back({other, {}});
        it = nbs.end() - 1;
      }
      it->sides.push_back(s);
    }
  }
  for (auto& p : parts)
    std::sort(p.neighbors.begin(), p.neighbors.end(),
              [](const NeighborSides& a, const NeighborSides& b) { return a.rank < b.rank; });
  return parts;
}

int owner_rank(const std::vector<Partition>& parts, int e) {
  auto it = std::upper_bound(parts.begin(), parts.end(), e,
                             [](int x, const Partition& p) { return x < p.elem_end; });
  if (it == parts.end() || !it->owns(e)) throw MeshError("element " + std::to_string(e) + " has no owner");
  return it->rank;
}

}  // namespace hexdg
