#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "hexdg/mesh.hpp"
#include "hexdg/output.hpp"

namespace hexdg {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace {

constexpr std::uint32_t kMeshVersion = 1;
constexpr std::uint32_t kNodeTypeLGL = 1;

template <class T>
void put(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& f, const std::string& path) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!f) throw IoError(path + ": truncated mesh file");
  return v;
}

}  // namespace

// Layout after the header (magic, version, N, n_elems, node_type):
//   coords        f64 x 3 (N+1)^3 n_elems
//   n_sides       u32
//   records       i32 x 6 per side: primary elem, primary side, replica elem,
//                 replica side, orientation, boundary tag
//   grid indices  i32 x 3 per element
//   box           f64 lo[3], f64 hi[3], u32 periodic mask, u32 mixed frames
void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write("HDGM", 4);
  put<std::uint32_t>(f, kMeshVersion);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(mesh.N));
  put<std::uint32_t>(f, static_cast<std::uint32_t>(mesh.n_elems));
  put<std::uint32_t>(f, kNodeTypeLGL);
  f.write(reinterpret_cast<const char*>(mesh.coords.data()),
          static_cast<std::streamsize>(mesh.coords.size() * sizeof(double)));
  put<std::uint32_t>(f, static_cast<std::uint32_t>(mesh.sides.size()));
  for (const Side& s : mesh.sides) {
    const std::int32_t rec[6] = {s.primary.elem, s.primary.loc_side, s.replica.elem,
                                 s.replica.loc_side, s.orientation, s.bc_tag};
    f.write(reinterpret_cast<const char*>(rec), sizeof rec);
  }
  for (int e = 0; e < mesh.n_elems; ++e) {
    const std::array<int, 3> g = mesh.grid_index.empty() ? std::array<int, 3>{e, 0, 0} : mesh.grid_index[e];
    for (int d = 0; d < 3; ++d) put<std::int32_t>(f, g[d]);
  }
  for (int d = 0; d < 3; ++d) put<double>(f, mesh.box.lo[d]);
  for (int d = 0; d < 3; ++d) put<double>(f, mesh.box.hi[d]);
  std::uint32_t mask = 0;
  for (int d = 0; d < 3; ++d)
    if (mesh.box.periodic[d]) mask |= 1u << d;
  put<std::uint32_t>(f, mask);
  put<std::uint32_t>(f, mesh.box.mixed_frames ? 1u : 0u);
  if (!f) throw IoError("write failed for " + path);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "HDGM", 4) != 0) throw IoError(path + ": not a mesh file");
  const auto version = get<std::uint32_t>(f, path);
  if (version != kMeshVersion) throw IoError(path + ": unsupported mesh version " + std::to_string(version));
  Mesh m;
  m.N = static_cast<int>(get<std::uint32_t>(f, path));
  m.n_elems = static_cast<int>(get<std::uint32_t>(f, path));
  if (get<std::uint32_t>(f, path) != kNodeTypeLGL) throw IoError(path + ": unsupported geometry node type");
  const int n = m.N + 1;
  m.coords.resize(static_cast<size_t>(m.n_elems) * n * n * n * 3);
  f.read(reinterpret_cast<char*>(m.coords.data()), static_cast<std::streamsize>(m.coords.size() * sizeof(double)));
  if (!f) throw IoError(path + ": truncated coordinates");
  const auto n_sides = get<std::uint32_t>(f, path);
  m.sides.resize(n_sides);
  m.elem_sides.assign(m.n_elems, {-1, -1, -1, -1, -1, -1});
  for (std::uint32_t s = 0; s < n_sides; ++s) {
    std::int32_t rec[6];
    for (auto& r : rec) r = get<std::int32_t>(f, path);
    Side& side = m.sides[s];
    side.primary = {rec[0], rec[1]};
    side.replica = {rec[2], rec[3]};
    side.orientation = rec[4];
    side.bc_tag = rec[5];
    auto valid = [&](int e, int loc) { return e >= 0 && e < m.n_elems && loc >= 0 && loc < kNumLocSides; };
    if (!valid(rec[0], rec[1]) || (rec[2] >= 0 && !valid(rec[2], rec[3])) || rec[4] < 0 || rec[4] > 3)
      throw IoError(path + ": corrupt side record " + std::to_string(s));
    m.elem_sides[rec[0]][rec[1]] = static_cast<int>(s);
    if (rec[2] >= 0) m.elem_sides[rec[2]][rec[3]] = static_cast<int>(s);
  }
  m.grid_index.resize(m.n_elems);
  for (int e = 0; e < m.n_elems; ++e)
    for (int d = 0; d < 3; ++d) m.grid_index[e][d] = get<std::int32_t>(f, path);
  for (int d = 0; d < 3; ++d) m.box.lo[d] = get<double>(f, path);
  for (int d = 0; d < 3; ++d) m.box.hi[d] = get<double>(f, path);
  const auto mask = get<std::uint32_t>(f, path);
  for (int d = 0; d < 3; ++d) m.box.periodic[d] = (mask >> d) & 1u;
  m.box.mixed_frames = get<std::uint32_t>(f, path) != 0;
  m.box.nx = m.box.ny = m.box.nz = 1;
  for (const auto& g : m.grid_index) {
    m.box.nx = std::max(m.box.nx, g[0] + 1);
    m.box.ny = std::max(m.box.ny, g[1] + 1);
    m.box.nz = std::max(m.box.nz, g[2] + 1);
  }
  for (int e = 0; e < m.n_elems; ++e)
    for (int l = 0; l < kNumLocSides; ++l)
      if (m.elem_sides[e][l] < 0)
        throw IoError(path + ": element " + std::to_string(e) + " side " + std::to_string(l) + " unconnected");
  return m;
}

}  // namespace hexdg
