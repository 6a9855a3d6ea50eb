#pragma once

// Run configuration: "key = value" text, case-insensitive keys, '!' comments.

#include <array>
#include <string>
#include <vector>

#include "hexdg/dg_operator.hpp"

namespace hexdg {

enum class TestCase { tgv, mms, sod, freestream };
const char* to_string(TestCase c);

struct RunConfig {
  TestCase testcase = TestCase::tgv;
  int N = 3;
  NodeType node_type = NodeType::GL;
  bool split = false;
  RiemannSolverKind riemann = RiemannSolverKind::llf;
  bool shock_capturing = false;
  IndicatorConfig indicator;
  std::string time_scheme = "carpenter-kennedy-5-4";
  double cfl = 0.9;
  double cfl_visc = 0.4;
  double fixed_dt = 0.0;

  double gamma = 1.4;
  double R = 1.0;
  double Pr = 0.71;
  /// Viscosity; for the TGV a negative value means mu0 = rho0 U0 L / Re.
  double mu = -1.0;
  bool sutherland = false;
  /// Sutherland reference temperature; negative means T0 of the case.
  double T_ref = -1.0;

  double Ma0 = 0.1;
  double Re = 1600.0;
  int tgv_version = 2;
  bool inviscid = false;
  double mms_amplitude = 0.1;
  double mms_speed = 1.0;
  double sod_x0 = 0.5;

  std::array<int, 3> elems{4, 4, 4};
  /// Domain box; empty (lo == hi) selects the case default.
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{0.0, 0.0, 0.0};
  double curve_amplitude = 0.0;
  bool mixed_frames = false;

  int n_ranks = 1;
  bool priorities = true;
  int chunk_elems = 4;
  double latency = 0.0;
  double t_end = 1.0;
  long max_steps = -1;
  int analyze_every = 10;
  int snapshot_every = 0;
  int trace_evaluations = 0;
  std::string output = "output";
  double power_per_rank = 0.0;

  std::vector<int> conv_N{2, 3, 4, 5};
  std::vector<int> conv_meshes{2, 4, 8, 16};
  std::vector<int> scaling_ranks{1, 2, 4, 8};

  /// Throws ConfigError for invariant violations (split or shock capturing on
  /// GL nodes, more ranks than elements, non-positive sizes).
  void validate() const;
};

/// Throws ConfigError (missing file, unknown key, bad value, invariant) with
/// the key name and line number where applicable.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>");
/// Effective configuration, one key per line; parse_config_text(to_text(c)) == c.
std::string to_text(const RunConfig& c);
/// Every key with its default value and a short description.
std::string defaults_text();

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace hexdg
