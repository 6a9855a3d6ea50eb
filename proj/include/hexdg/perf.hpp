#pragma once

// Performance index (PID), energy-weighted PID and report tables.

#include <stdexcept>
#include <vector>

#include "hexdg/output.hpp"
#include "hexdg/runtime.hpp"

namespace hexdg {

struct PerfRecord {
  double walltime = 0.0;
  int n_ranks = 0;
  long n_rk_stages = 0;
  long long n_dof = 0;
  double power_per_rank = 0.0;
  std::vector<KernelTime> kernels;
};

/// walltime * n_ranks / (n_rk_stages * n_dof); throws std::invalid_argument
/// unless all counts are positive.
double compute_pid(const PerfRecord& r);
/// power_per_rank * PID.
double compute_epid(const PerfRecord& r);

PerfRecord perf_record(const RunResult& res, int n_ranks, long long n_dof, double power_per_rank);

/// One row per run: n_ranks, n_dof, dof_per_rank, walltime, pid, epid,
/// weak_efficiency (PID of the first run / PID), strong_speedup (walltime of
/// the first run with the same n_dof / walltime).
CsvTable scaling_report(const std::vector<PerfRecord>& runs);

/// (kernel, total_s, percent, rank); percent of the rank's operator time
/// (of the summed kernel time when operator_time is empty). Rows ordered by
/// rank, then descending time.
CsvTable kernel_report(const std::vector<KernelTime>& kernels, const std::vector<double>& operator_time = {});

}  // namespace hexdg
