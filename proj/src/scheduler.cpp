#include "hexdg/scheduler.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace hexdg {

const char* priority_name(Priority p) {
  switch (p) {
    case Priority::low:
      return "low";
    case Priority::mid:
      return "mid";
    case Priority::top:
      return "top";
  }
  return "?";
}

int TaskGraph::add(Task t) {
  tasks_.push_back(std::move(t));
  return static_cast<int>(tasks_.size()) - 1;
}

void TaskGraph::validate() const {
  const int n = static_cast<int>(tasks_.size());
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i)
    for (int d : tasks_[i].deps) {
      if (d < 0 || d >= n) throw SchedulerError("task '" + tasks_[i].name + "' has a dangling dependency");
      out[d].push_back(i);
      ++indeg[i];
    }
  std::deque<int> q;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push_back(i);
  int seen = 0;
  while (!q.empty()) {
    const int i = q.front();
    q.pop_front();
    ++seen;
    for (int j : out[i])
      if (--indeg[j] == 0) q.push_back(j);
  }
  if (seen != n) {
    for (int i = 0; i < n; ++i)
      if (indeg[i] > 0) throw SchedulerError("dependency cycle through task '" + tasks_[i].name + "'");
  }
}

Scheduler::Scheduler(const TaskGraph& graph, Transport* transport, int rank, ScheduleOptions opt)
    : graph_(graph), transport_(transport), rank_(rank), opt_(opt) {
  graph_.validate();
  const auto& ts = graph_.tasks();
  dependents_.resize(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    for (int d : ts[i].deps) dependents_[d].push_back(static_cast<int>(i));
    if (!ts[i].recvs.empty() && !transport_) throw SchedulerError("task '" + ts[i].name + "' receives without transport");
  }
}

void Scheduler::run(Clock::time_point origin, std::vector<TraceEvent>& events, OverlapStats& overlap) {
  const auto& ts = graph_.tasks();
  const int n = static_cast<int>(ts.size());
  std::vector<int> missing(n);
  for (int i = 0; i < n; ++i) missing[i] = static_cast<int>(ts[i].deps.size());
  const size_t first_event = events.size();
  auto seconds = [&](Clock::time_point t) { return std::chrono::duration<double>(t - origin).count(); };

  std::map<std::pair<int, int>, double> send_time;
  struct Window {
    double begin, end;
    int task;
  };
  std::vector<Window> windows;

  auto execute = [&](int i, double ready_time) {
    const Task& t = ts[i];
    const auto start = Clock::now();
    for (const RecvDep& r : t.recvs) {
      auto it = send_time.find({r.from, static_cast<int>(r.phase)});
      const double b = it != send_time.end() ? it->second : ready_time;
      windows.push_back({b, seconds(start), i});
    }
    t.fn();
    const auto end = Clock::now();
    for (const RecvDep& s : t.sends) send_time[{s.from, static_cast<int>(s.phase)}] = seconds(end);
    events.push_back({i, t.priority, seconds(start), seconds(end), rank_});
    for (int j : dependents_[i]) --missing[j];
  };

  auto recvs_visible = [&](int i) {
    for (const RecvDep& r : ts[i].recvs)
      if (!transport_->probe(rank_, r.from, r.phase)) return false;
    return true;
  };

  if (!opt_.priorities) {
    for (int i = 0; i < n; ++i) {
      if (missing[i] != 0) throw SchedulerError("task '" + ts[i].name + "' precedes one of its dependencies");
      const double ready = seconds(Clock::now());
      // The receive itself happens inside the task; the window closes when the data is in hand.
      const auto& t = ts[i];
      if (!t.recvs.empty()) {
        std::vector<std::pair<int, Phase>> keys;
        for (const RecvDep& r : t.recvs) keys.push_back({r.from, r.phase});
        while (!recvs_visible(i)) transport_->wait_any(rank_, keys);
      }
      execute(i, ready);
    }
  } else {
    std::vector<bool> done(n, false);
    std::vector<double> ready_at(n, 0.0);
    std::deque<int> queue[3];
    std::vector<bool> queued(n, false);
    int remaining = n;
    auto enqueue_ready = [&] {
      const double now = seconds(Clock::now());
      for (int i = 0; i < n; ++i)
        if (!queued[i] && missing[i] == 0) {
          queued[i] = true;
          ready_at[i] = now;
          queue[static_cast<int>(ts[i].priority)].push_back(i);
        }
    };
    enqueue_ready();
    while (remaining > 0) {
      int pick = -1;
      for (int c = 2; c >= 0 && pick < 0; --c)
        for (auto it = queue[c].begin(); it != queue[c].end(); ++it)
          if (ts[*it].recvs.empty() || recvs_visible(*it)) {
            pick = *it;
            queue[c].erase(it);
            break;
          }
      if (pick < 0) {
        std::vector<std::pair<int, Phase>> keys;
        for (const auto& q : queue)
          for (int i : q)
            for (const RecvDep& r : ts[i].recvs) keys.push_back({r.from, r.phase});
        if (keys.empty()) throw SchedulerError("no runnable task and nothing to wait for");
        transport_->wait_any(rank_, keys);
        continue;
      }
      execute(pick, ready_at[pick]);
      done[pick] = true;
      --remaining;
      for (int j : dependents_[pick])
        if (missing[j] == 0 && !queued[j]) {
          queued[j] = true;
          ready_at[j] = seconds(Clock::now());
          queue[static_cast<int>(ts[j].priority)].push_back(j);
        }
    }
  }

  for (const Window& w : windows) {
    if (w.end <= w.begin) continue;
    overlap.window += w.end - w.begin;
    for (size_t k = first_event; k < events.size(); ++k) {
      const TraceEvent& ev = events[k];
      if (ev.task == w.task) continue;
      const double lo = std::max(ev.start, w.begin);
      const double hi = std::min(ev.end, w.end);
      if (hi > lo) overlap.covered += hi - lo;
    }
  }
}

}  // namespace hexdg
