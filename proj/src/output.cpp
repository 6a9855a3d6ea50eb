#include "hexdg/output.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hexdg {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

double CsvTable::number(size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw IoError("csv: no column '" + name + "'");
  if (row >= rows.size() || static_cast<size_t>(c) >= rows[row].size()) throw IoError("csv: row out of range");
  return std::stod(rows[row][c]);
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  if (!out) throw IoError("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable t;
  std::string s;
  bool first = true;
  while (std::getline(in, s)) {
    if (s.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw IoError("empty csv file " + path);
  return t;
}

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw IoError("truncated snapshot " + path);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
  const size_t expect = static_cast<size_t>(s.n_elems) * (s.N + 1) * (s.N + 1) * (s.N + 1) * s.n_var;
  if (s.U.size() != expect) throw IoError("snapshot payload size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write("HDGF", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::int32_t>(out, s.N);
  put<std::int32_t>(out, s.n_elems);
  put<std::int32_t>(out, s.n_var);
  put<double>(out, s.time);
  out.write(reinterpret_cast<const char*>(s.U.data()), static_cast<std::streamsize>(s.U.size() * sizeof(double)));
  put<std::uint32_t>(out, s.alpha.empty() ? 0u : 1u);
  if (!s.alpha.empty())
    out.write(reinterpret_cast<const char*>(s.alpha.data()),
              static_cast<std::streamsize>(s.alpha.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "HDGF", 4) != 0) throw IoError("not a snapshot file: " + path);
  const auto version = get<std::uint32_t>(in, path);
  if (version != kSnapshotVersion) throw IoError("unsupported snapshot version " + std::to_string(version));
  Snapshot s;
  s.N = get<std::int32_t>(in, path);
  s.n_elems = get<std::int32_t>(in, path);
  s.n_var = get<std::int32_t>(in, path);
  s.time = get<double>(in, path);
  if (s.N < 1 || s.n_elems < 1 || s.n_var < 1) throw IoError("corrupt snapshot header: " + path);
  s.U.resize(static_cast<size_t>(s.n_elems) * (s.N + 1) * (s.N + 1) * (s.N + 1) * s.n_var);
  if (!in.read(reinterpret_cast<char*>(s.U.data()), static_cast<std::streamsize>(s.U.size() * sizeof(double))))
    throw IoError("truncated snapshot " + path);
  if (get<std::uint32_t>(in, path)) {
    s.alpha.resize(s.n_elems);
    if (!in.read(reinterpret_cast<char*>(s.alpha.data()),
                 static_cast<std::streamsize>(s.alpha.size() * sizeof(double))))
      throw IoError("truncated snapshot " + path);
  }
  return s;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

}  // namespace hexdg
