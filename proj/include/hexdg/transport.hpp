#pragma once

// In-process message passing between rank workers. Each receiver owns a
// mailbox keyed by (sender, phase); messages between a pair of ranks with the
// same phase are delivered in FIFO order. An optional latency delays
// visibility to emulate a network.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hexdg {

using Clock = std::chrono::steady_clock;

enum class Phase : int { traces = 0, fluxes = 1, lifted_traces = 2, lifted_fluxes = 3 };
inline constexpr int kNumPhases = 4;
const char* phase_name(Phase p);

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown in every blocked worker once another worker has failed.
class AbortedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caps the number of rank workers computing at the same time. A worker
/// gives up its slot while blocked in the transport.
class ComputeSlots {
 public:
  explicit ComputeSlots(int n) : free_(n) {}
  void acquire();
  void release();

 private:
  std::mutex m_;
  std::condition_variable cv_;
  int free_;
};

/// Reads HEXDG_THREADS; falls back to the hardware concurrency.
int worker_cap_from_env();

class Transport {
 public:
  Transport(int n_ranks, double latency_s = 0.0, int max_computing = 0);

  int n_ranks() const { return n_ranks_; }

  void send(int from, int to, Phase phase, std::vector<double> payload);
  /// True if a message from `from` with this phase is visible to `me`.
  bool probe(int me, int from, Phase phase);
  /// Blocks until the message is visible and removes it.
  std::vector<double> recv(int me, int from, Phase phase);
  /// recv, throwing ProtocolError (naming the phase) on a length mismatch.
  std::vector<double> recv_expect(int me, int from, Phase phase, size_t expected);
  /// Blocks until a message for one of the (sender, phase) keys is visible.
  void wait_any(int me, const std::vector<std::pair<int, Phase>>& keys);

  double allreduce_min(int me, double v);
  double allreduce_max(int me, double v);
  /// Concatenation of every rank's contribution in rank order.
  std::vector<double> allgather(int me, const std::vector<double>& v);
  void barrier(int me);

  void abort(const std::string& reason);
  bool aborted() const;

  /// Worker entry / exit for the compute-slot cap.
  void enter_compute();
  void leave_compute();

  std::int64_t messages_sent() const;
  std::int64_t bytes_sent() const;
  void reset_counters();

 private:
  struct Pending {
    Clock::time_point available_at;
    std::vector<double> payload;
  };
  struct Mailbox {
    std::mutex m;
    std::condition_variable cv;
    std::map<std::pair<int, int>, std::deque<Pending>> queues;
  };

  void check_abort() const;
  template <class Pred>
  void blocking_wait(std::unique_lock<std::mutex>& lk, std::condition_variable& cv, Pred ready,
                     Clock::time_point until);

  int n_ranks_;
  Clock::duration latency_;
  std::vector<std::unique_ptr<Mailbox>> boxes_;

  mutable std::mutex coll_m_;
  std::condition_variable coll_cv_;
  int coll_arrived_ = 0;
  std::uint64_t coll_generation_ = 0;
  std::vector<std::vector<double>> coll_slots_;
  std::vector<double> coll_result_;

  mutable std::mutex stat_m_;
  std::int64_t messages_ = 0;
  std::int64_t bytes_ = 0;
  bool aborted_ = false;
  std::string abort_reason_;

  ComputeSlots slots_;
};

}  // namespace hexdg
