#pragma once

// Dependency-driven task execution for one rank with three priority classes.
// Tasks may additionally wait for messages; with priorities enabled such a
// task only starts once its messages are visible, so other ready work fills
// the gap. With priorities disabled tasks run strictly in insertion order and
// receives block, which is the plain sequential code path.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexdg/transport.hpp"

namespace hexdg {

enum class Priority : int { low = 0, mid = 1, top = 2 };
const char* priority_name(Priority p);

class SchedulerError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RecvDep {
  int from = -1;
  Phase phase = Phase::traces;
};

struct Task {
  std::string name;
  std::string kernel;  // timer bucket
  Priority priority = Priority::low;
  std::vector<int> deps;
  std::vector<RecvDep> recvs;
  std::vector<RecvDep> sends;  // messages this task posts (for overlap accounting)
  std::function<void()> fn;
};

class TaskGraph {
 public:
  int add(Task t);
  /// Throws SchedulerError on a dependency cycle or a dangling dependency.
  void validate() const;
  const std::vector<Task>& tasks() const { return tasks_; }
  size_t size() const { return tasks_.size(); }

 private:
  std::vector<Task> tasks_;
};

struct TraceEvent {
  int task = -1;
  Priority priority = Priority::low;
  double start = 0.0;  // seconds since the trace origin
  double end = 0.0;
  int rank = 0;
};

struct OverlapStats {
  double window = 0.0;   // summed time between posting a send and consuming the matching receive
  double covered = 0.0;  // part of those windows spent executing other tasks
  double fraction() const { return window > 0.0 ? covered / window : 0.0; }
  void add(const OverlapStats& o) {
    window += o.window;
    covered += o.covered;
  }
};

struct ScheduleOptions {
  bool priorities = true;
};

class Scheduler {
 public:
  /// Runs every task of the graph once. transport may be null when no task
  /// has receive dependencies.
  Scheduler(const TaskGraph& graph, Transport* transport, int rank, ScheduleOptions opt);

  /// Executes the graph; events are appended to `events` (times relative to origin).
  void run(Clock::time_point origin, std::vector<TraceEvent>& events, OverlapStats& overlap);

 private:
  const TaskGraph& graph_;
  Transport* transport_;
  int rank_;
  ScheduleOptions opt_;
  std::vector<std::vector<int>> dependents_;
};

}  // namespace hexdg
