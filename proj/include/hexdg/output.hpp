#pragma once

// File formats: CSV tables and binary "HDGF" solution snapshots.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexdg {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
  double number(size_t row, const std::string& name) const;
};

/// Shortest representation that reads back exactly.
std::string format_double(double v);
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  int N = 0;
  int n_elems = 0;
  int n_var = 5;
  double time = 0.0;
  std::vector<double> U;      // ConservedField layout
  std::vector<double> alpha;  // per element; empty when shock capturing is off
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

/// Creates the directory (and parents) or throws IoError.
void ensure_directory(const std::string& path);

}  // namespace hexdg
