#pragma once

// Case construction and the run / convergence / scaling / perf-report drivers.

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hexdg/config.hpp"
#include "hexdg/perf.hpp"
#include "hexdg/runtime.hpp"

namespace hexdg {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

struct CaseSetup {
  std::unique_ptr<Discretization> disc;
  std::vector<double> U0;
  AnalysisScales scales;
  /// Exact density for cases that have one (mms, freestream).
  std::function<double(const Vec3&, double)> exact_density;
};

GasProperties case_gas(const RunConfig& cfg);
Mesh case_mesh(const RunConfig& cfg);
CaseSetup build_case(const RunConfig& cfg);

RunControl run_control(const RunConfig& cfg);
RuntimeOptions runtime_options(const RunConfig& cfg);

struct ConvergenceRow {
  int N = 0;
  int elems = 0;
  long long n_dof = 0;
  double error = 0.0;
  double eoc = 0.0;  // 0 on the first valid row of a degree
  std::string status;  // ok | diverged | non-decreasing
};

/// Manufactured-solution runs to t_end for every (conv_N, conv_meshes) pair
/// with the configured node type and operator.
std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, std::ostream* log = nullptr);
CsvTable convergence_table(const std::vector<ConvergenceRow>& rows);

/// Columns of timeseries.csv.
std::vector<std::string> timeseries_header();
std::vector<std::string> timeseries_row(const AnalysisRecord& r);

std::string snapshot_name(long step);

/// Maps an exception escaping a driver to its exit code and prints it.
int report_failure(std::ostream& err);

int cmd_run(const RunConfig& cfg, std::ostream& log);
int cmd_convergence(const RunConfig& cfg, std::ostream& log);
int cmd_scaling(const RunConfig& cfg, std::ostream& log);
int cmd_perf_report(const RunConfig& cfg, std::ostream& log);

}  // namespace hexdg
