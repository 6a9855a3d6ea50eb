#pragma once

// Multi-rank time stepping. Every rank is a worker thread owning a contiguous
// range of elements along the space-filling curve; ranks exchange face data
// through the Transport and schedule their kernels with the three-priority
// task graph.

#include <functional>
#include <string>
#include <vector>

#include "hexdg/dg_operator.hpp"
#include "hexdg/scheduler.hpp"
#include "hexdg/testcases.hpp"
#include "hexdg/time_integration.hpp"
#include "hexdg/transport.hpp"

namespace hexdg {

struct RuntimeOptions {
  int n_ranks = 1;
  bool priorities = true;
  int chunk_elems = 4;
  double latency_s = 0.0;
  /// Concurrently computing ranks; 0 reads HEXDG_THREADS.
  int max_computing = 0;
  /// Number of rhs evaluations (from the start) whose task trace is kept.
  int trace_evaluations = 0;
  /// Explicit partition cut points (size n_ranks + 1); empty = even SFC split.
  std::vector<int> cuts;
};

struct RunControl {
  std::string scheme = "carpenter-kennedy-5-4";
  TimestepConfig timestep;
  double t_end = 1.0;
  long max_steps = -1;
  double fixed_dt = 0.0;
  /// Analysis at step 0, every analyze_every steps and at the end (0: off).
  int analyze_every = 0;
  /// Snapshots every snapshot_every steps and at the end (0: off).
  int snapshot_every = 0;
  AnalysisScales scales;
  std::function<void(const AnalysisRecord&)> on_analysis;
  std::function<void(double t, long step, const std::vector<double>& U, const std::vector<double>& alpha)>
      on_snapshot;
};

struct TraceRow {
  std::string task;
  Priority priority = Priority::low;
  double start = 0.0;
  double end = 0.0;
  int rank = 0;
  int evaluation = 0;
};

struct KernelTime {
  std::string kernel;
  int rank = 0;
  double seconds = 0.0;
};

struct RunResult {
  double t = 0.0;
  long steps = 0;
  long stages = 0;
  /// Time-stepping wall time (initialization and analysis excluded), max over ranks.
  double walltime = 0.0;
  /// Per rank: wall time inside the operator evaluations.
  std::vector<double> operator_time;
  std::vector<KernelTime> kernel_times;
  OverlapStats overlap;
  std::int64_t messages = 0;
  std::int64_t bytes = 0;
  std::vector<TraceRow> trace;
  std::vector<double> alpha;  // per element at the final time
};

/// Advances U (global field, ConservedField layout) from t0 and returns the
/// final state in U. Rethrows the first error raised on any rank.
RunResult run_distributed(const Discretization& disc, std::vector<double>& U, double t0, const RunControl& ctl,
                          const RuntimeOptions& opt);

/// A single rhs evaluation through the distributed pipeline (for tests).
std::vector<double> distributed_time_derivative(const Discretization& disc, const std::vector<double>& U, double t,
                                                const RuntimeOptions& opt);

}  // namespace hexdg
