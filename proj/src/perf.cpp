#include "hexdg/perf.hpp"

#include <algorithm>
#include <map>

namespace hexdg {

double compute_pid(const PerfRecord& r) {
  if (r.walltime <= 0.0 || r.n_ranks <= 0 || r.n_rk_stages <= 0 || r.n_dof <= 0)
    throw std::invalid_argument("PID needs positive walltime, rank, stage and DOF counts");
  return r.walltime * r.n_ranks / (static_cast<double>(r.n_rk_stages) * static_cast<double>(r.n_dof));
}

double compute_epid(const PerfRecord& r) {
  if (r.power_per_rank < 0.0) throw std::invalid_argument("EPID needs a non-negative power per rank");
  return r.power_per_rank * compute_pid(r);
}

PerfRecord perf_record(const RunResult& res, int n_ranks, long long n_dof, double power_per_rank) {
  PerfRecord p;
  p.walltime = res.walltime;
  p.n_ranks = n_ranks;
  p.n_rk_stages = res.stages;
  p.n_dof = n_dof;
  p.power_per_rank = power_per_rank;
  p.kernels = res.kernel_times;
  return p;
}

CsvTable scaling_report(const std::vector<PerfRecord>& runs) {
  if (runs.size() < 2) throw std::invalid_argument("scaling report needs at least two runs");
  for (const auto& r : runs)
    if (r.power_per_rank != runs.front().power_per_rank)
      throw std::invalid_argument("scaling report: runs use different power_per_rank");
  CsvTable t;
  t.header = {"n_ranks", "n_dof", "dof_per_rank", "walltime", "pid", "epid", "weak_efficiency", "strong_speedup"};
  const double pid_ref = compute_pid(runs.front());
  for (const auto& r : runs) {
    const double pid = compute_pid(r);
    std::string speedup;
    for (const auto& q : runs)
      if (q.n_dof == r.n_dof) {
        speedup = format_double(q.walltime / r.walltime);
        break;
      }
    t.rows.push_back({std::to_string(r.n_ranks), std::to_string(r.n_dof),
                      format_double(static_cast<double>(r.n_dof) / r.n_ranks), format_double(r.walltime),
                      format_double(pid), format_double(compute_epid(r)), format_double(pid_ref / pid), speedup});
  }
  return t;
}

CsvTable kernel_report(const std::vector<KernelTime>& kernels, const std::vector<double>& operator_time) {
  std::map<int, std::vector<KernelTime>> by_rank;
  for (const auto& k : kernels) {
    auto& v = by_rank[k.rank];
    auto it = std::find_if(v.begin(), v.end(), [&](const KernelTime& x) { return x.kernel == k.kernel; });
    if (it == v.end()) {
      v.push_back(k);
    } else {
      it->seconds += k.seconds;
    }
  }
  CsvTable t;
  t.header = {"kernel", "total_s", "percent", "rank"};
  for (auto& [rank, v] : by_rank) {
    double total = 0.0;
    for (const auto& k : v) total += k.seconds;
    if (rank >= 0 && static_cast<size_t>(rank) < operator_time.size() && operator_time[rank] > 0.0)
      total = operator_time[rank];
    std::stable_sort(v.begin(), v.end(), [](const KernelTime& a, const KernelTime& b) { return a.seconds > b.seconds; });
    for (const auto& k : v)
      t.rows.push_back({k.kernel, format_double(k.seconds), format_double(total > 0 ? 100.0 * k.seconds / total : 0.0),
                        std::to_string(rank)});
  }
  return t;
}

}  // namespace hexdg
