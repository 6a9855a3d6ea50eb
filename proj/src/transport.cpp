#include "hexdg/transport.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <memory>
#include <thread>

namespace hexdg {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::traces:
      return "traces";
    case Phase::fluxes:
      return "fluxes";
    case Phase::lifted_traces:
      return "lifted-traces";
    case Phase::lifted_fluxes:
      return "lifted-fluxes";
  }
  return "?";
}

void ComputeSlots::acquire() {
  std::unique_lock lk(m_);
  cv_.wait(lk, [&] { return free_ > 0; });
  --free_;
}

void ComputeSlots::release() {
  {
    std::lock_guard lk(m_);
    ++free_;
  }
  cv_.notify_one();
}

int worker_cap_from_env() {
  if (const char* s = std::getenv("HEXDG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
thread_local bool t_holds_slot = false;
}

Transport::Transport(int n_ranks, double latency_s, int max_computing)
    : n_ranks_(n_ranks),
      latency_(std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(latency_s))),
      coll_slots_(n_ranks),
      slots_(max_computing > 0 ? max_computing : worker_cap_from_env()) {
  if (n_ranks < 1) throw std::invalid_argument("transport needs at least one rank");
  for (int r = 0; r < n_ranks; ++r) boxes_.push_back(std::make_unique<Mailbox>());
}

void Transport::enter_compute() {
  slots_.acquire();
  t_holds_slot = true;
}

void Transport::leave_compute() {
  if (t_holds_slot) {
    t_holds_slot = false;
    slots_.release();
  }
}

void Transport::check_abort() const {
  std::lock_guard lk(stat_m_);
  if (aborted_) throw AbortedError("aborted: " + abort_reason_);
}

void Transport::abort(const std::string& reason) {
  {
    std::lock_guard lk(stat_m_);
    if (!aborted_) {
      aborted_ = true;
      abort_reason_ = reason;
    }
  }
  for (auto& b : boxes_) {
    std::lock_guard lk(b->m);
    b->cv.notify_all();
  }
  std::lock_guard lk(coll_m_);
  coll_cv_.notify_all();
}

bool Transport::aborted() const {
  std::lock_guard lk(stat_m_);
  return aborted_;
}

template <class Pred>
void Transport::blocking_wait(std::unique_lock<std::mutex>& lk, std::condition_variable& cv, Pred ready,
                              Clock::time_point until) {
  if (ready()) return;
  const bool had_slot = t_holds_slot;
  if (had_slot) {
    t_holds_slot = false;
    slots_.release();
  }
  while (!ready()) {
    if (aborted()) break;
    if (until == Clock::time_point::max()) {
      cv.wait_for(lk, std::chrono::milliseconds(50));
    } else {
      if (cv.wait_until(lk, until) == std::cv_status::timeout) break;
    }
  }
  if (had_slot) {
    lk.unlock();
    slots_.acquire();
    t_holds_slot = true;
    lk.lock();
  }
  check_abort();
}

void Transport::send(int from, int to, Phase phase, std::vector<double> payload) {
  check_abort();
  {
    std::lock_guard lk(stat_m_);
    ++messages_;
    bytes_ += static_cast<std::int64_t>(payload.size() * sizeof(double));
  }
  Mailbox& b = *boxes_.at(to);
  {
    std::lock_guard lk(b.m);
    b.queues[{from, static_cast<int>(phase)}].push_back({Clock::now() + latency_, std::move(payload)});
  }
  b.cv.notify_all();
}

bool Transport::probe(int me, int from, Phase phase) {
  Mailbox& b = *boxes_[me];
  std::lock_guard lk(b.m);
  auto it = b.queues.find({from, static_cast<int>(phase)});
  return it != b.queues.end() && !it->second.empty() && it->second.front().available_at <= Clock::now();
}

std::vector<double> Transport::recv(int me, int from, Phase phase) {
  Mailbox& b = *boxes_[me];
  std::unique_lock lk(b.m);
  auto& q = b.queues[{from, static_cast<int>(phase)}];
  for (;;) {
    if (!q.empty() && q.front().available_at <= Clock::now()) break;
    const auto until = q.empty() ? Clock::time_point::max() : q.front().available_at;
    blocking_wait(lk, b.cv, [&] { return !q.empty() && q.front().available_at <= Clock::now(); }, until);
  }
  std::vector<double> out = std::move(q.front().payload);
  q.pop_front();
  return out;
}

std::vector<double> Transport::recv_expect(int me, int from, Phase phase, size_t expected) {
  std::vector<double> buf = recv(me, from, phase);
  if (buf.size() != expected)
    throw ProtocolError(std::string("phase ") + phase_name(phase) + ": rank " + std::to_string(me) + " expected " +
                        std::to_string(expected) + " values from rank " + std::to_string(from) + ", got " +
                        std::to_string(buf.size()));
  return buf;
}

void Transport::wait_any(int me, const std::vector<std::pair<int, Phase>>& keys) {
  Mailbox& b = *boxes_[me];
  std::unique_lock lk(b.m);
  // Earliest time one of the keyed messages becomes visible (max if none queued).
  auto earliest = [&] {
    auto t = Clock::time_point::max();
    for (const auto& [from, phase] : keys) {
      auto it = b.queues.find({from, static_cast<int>(phase)});
      if (it != b.queues.end() && !it->second.empty()) t = std::min(t, it->second.front().available_at);
    }
    return t;
  };
  for (;;) {
    const auto t = earliest();
    if (t <= Clock::now()) return;
    blocking_wait(lk, b.cv, [&] { return earliest() != t || t <= Clock::now(); }, t);
  }
}

double Transport::allreduce_min(int me, double v) {
  const auto all = allgather(me, {v});
  return *std::min_element(all.begin(), all.end());
}

double Transport::allreduce_max(int me, double v) {
  const auto all = allgather(me, {v});
  return *std::max_element(all.begin(), all.end());
}

std::vector<double> Transport::allgather(int me, const std::vector<double>& v) {
  std::unique_lock lk(coll_m_);
  check_abort();
  coll_slots_[me] = v;
  const std::uint64_t gen = coll_generation_;
  if (++coll_arrived_ == n_ranks_) {
    coll_result_.clear();
    for (const auto& s : coll_slots_) coll_result_.insert(coll_result_.end(), s.begin(), s.end());
    coll_arrived_ = 0;
    ++coll_generation_;
    coll_cv_.notify_all();
  } else {
    blocking_wait(lk, coll_cv_, [&] { return coll_generation_ != gen; }, Clock::time_point::max());
  }
  // The result stays valid until the next collective completes, which needs
  // this rank to arrive again, so copying here is safe.
  return coll_result_;
}

void Transport::barrier(int me) { allgather(me, {}); }

std::int64_t Transport::messages_sent() const {
  std::lock_guard lk(stat_m_);
  return messages_;
}

std::int64_t Transport::bytes_sent() const {
  std::lock_guard lk(stat_m_);
  return bytes_;
}

void Transport::reset_counters() {
  std::lock_guard lk(stat_m_);
  messages_ = 0;
  bytes_ = 0;
}

}  // namespace hexdg
