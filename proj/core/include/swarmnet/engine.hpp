#pragma once

// Deterministic discrete-event core: virtual clock, (fire_at, seq) ordered
// queue, named RNG streams.

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "swarmnet/types.hpp"

namespace swarmnet {

/// Independent pseudo-random stream keyed by (seed, label, index).
/// Identical keys give identical draw sequences on the same toolchain.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

  std::uint64_t seed() const { return seed_; }

  double uniform();                          // [0, 1)
  double uniform(double lo, double hi);      // [lo, hi], lo == hi allowed
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive
  bool bernoulli(double p);
  /// Gamma(shape, scale); mean shape * scale.
  double gamma(double shape, double scale);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::string_view label, std::uint64_t index);

template <typename Payload>
struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  Payload payload;
};

/// Min-queue over (fire_at, seq). Refuses events earlier than the clock.
template <typename Payload>
class EventQueue {
 public:
  using EventT = Event<Payload>;

  SimTime now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint64_t scheduled_count() const { return next_seq_; }

  /// Returns the assigned sequence number.
  std::uint64_t schedule(SimTime at, Payload payload) {
    if (at < now_) throw HardFault("event scheduled in the past");
    const auto seq = next_seq_++;
    heap_.push(EventT{at, seq, std::move(payload)});
    return seq;
  }

  /// Inserts a fully-formed event. Its seq must not collide with ones this
  /// queue hands out; used by tests that pin explicit sequence numbers.
  void schedule_raw(EventT e) {
    if (e.fire_at < now_) throw HardFault("event scheduled in the past");
    if (e.seq >= next_seq_) next_seq_ = e.seq + 1;
    heap_.push(std::move(e));
  }

  const EventT& top() const { return heap_.top(); }

  EventT pop() {
    EventT e = heap_.top();
    heap_.pop();
    now_ = e.fire_at;
    return e;
  }

  /// Moves the clock forward without an event (end of a run).
  void advance_to(SimTime t) {
    if (t < now_) throw HardFault("clock cannot move backwards");
    now_ = t;
  }

 private:
  struct Later {
    bool operator()(const EventT& a, const EventT& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<EventT, std::vector<EventT>, Later> heap_;
  SimTime now_{};
  std::uint64_t next_seq_ = 0;
};

enum class RunOutcome { kHorizonReached, kStopRule };

/// Drains `queue` in (fire_at, seq) order up to and including `t_end`.
/// `stop` is polled after each event; returning true ends the run early.
template <typename Payload, typename Handler, typename Stop>
RunOutcome run_until(EventQueue<Payload>& queue, SimTime t_end, Handler&& handle, Stop&& stop) {
  while (!queue.empty() && queue.top().fire_at <= t_end) {
    auto e = queue.pop();
    handle(e);
    if (stop()) return RunOutcome::kStopRule;
  }
  queue.advance_to(t_end);
  return RunOutcome::kHorizonReached;
}

}  // namespace swarmnet
