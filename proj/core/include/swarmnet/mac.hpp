#pragma once

// SC-HybridMAC superframe: contention window (CSMA/CA), scheduled window
// (TDMA, one slot per registered member) and broadcast window (head only).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmnet/engine.hpp"
#include "swarmnet/types.hpp"

namespace swarmnet::mac {

struct MacConfig {
  SimTime contention_len = SimTime::from_ms(20);
  SimTime scheduled_len = SimTime::from_ms(70);
  SimTime broadcast_len = SimTime::from_ms(10);
  SimTime guard = SimTime::from_us(0);
  SimTime backoff_slot = SimTime::from_ms(1);
  int cw_min = 8;
  int cw_max = 64;
  int retry_limit = 4;
  bool slots_by_backlog = false;

  SimTime frame_len() const { return contention_len + scheduled_len + broadcast_len; }
  std::vector<std::string> validate() const;
};

struct Slot {
  NodeId member = 0;
  SimTime offset;  // from the start of the scheduled window
  SimTime length;  // usable airtime, guard excluded
};

struct Interval {
  SimTime begin;
  SimTime end;
  SimTime length() const { return end - begin; }
  bool contains(SimTime t) const { return t >= begin && t < end; }
  bool overlaps(const Interval& o) const { return begin < o.end && o.begin < end; }
};

struct Superframe {
  NodeId head = 0;
  SimTime start;
  SimTime contention_len;
  SimTime scheduled_len;
  SimTime broadcast_len;
  std::vector<Slot> slots;  // member registration order

  SimTime frame_len() const { return contention_len + scheduled_len + broadcast_len; }
  Interval contention() const { return {start, start + contention_len}; }
  Interval scheduled() const {
    return {start + contention_len, start + contention_len + scheduled_len};
  }
  Interval broadcast() const { return {scheduled().end, scheduled().end + broadcast_len}; }
  std::optional<Interval> slot_of(NodeId member) const;

  /// Windows contiguous and tiling [start, start+frame_len); slots inside the
  /// scheduled window and pairwise disjoint.
  bool tiles() const;
};

/// Splits the scheduled window into equal slots in registration order. With
/// no members the scheduled window collapses to zero length. `backlog`
/// (optional, parallel to `members`) weights slot lengths when
/// cfg.slots_by_backlog is set.
Superframe build_superframe(NodeId head, const std::vector<NodeId>& members, const MacConfig& cfg,
                            SimTime start, const std::vector<std::size_t>* backlog = nullptr);

struct BackoffState {
  int cw = 8;
  int retries = 0;
  int backoff_remaining = 0;
};

BackoffState fresh_backoff(const MacConfig& cfg);

/// Draws a uniform backoff in [0, cw).
void draw_backoff(BackoffState& s, RngStream& rng);

enum class CsmaDecision { kTransmit, kWait, kDefer };

/// One backoff-slot boundary. Busy medium freezes the counter; an expired
/// counter transmits if the frame fits before the window closes, otherwise
/// the frame waits for the next superframe.
CsmaDecision csma_attempt(BackoffState& s, bool channel_busy, bool fits_in_window);

/// Unacknowledged transmission. Returns true when the frame must be dropped
/// (retry limit exhausted); otherwise the window is doubled and redrawn.
bool on_tx_failure(BackoffState& s, RngStream& rng, const MacConfig& cfg);
void on_tx_success(BackoffState& s, RngStream& rng, const MacConfig& cfg);

/// Whole frames of `airtime` that fit in a slot of `slot_len`.
std::size_t frames_per_slot(SimTime slot_len, SimTime airtime);

enum class SlotCheck { kCompliant, kViolation };

/// A transmission is compliant only when it lies wholly inside the sender's slot.
SlotCheck check_transmission(const Superframe& sf, NodeId sender, Interval tx);

/// Sleep intervals of `member` inside the scheduled window: every slot but its
/// own. Heads never sleep.
std::vector<Interval> sleep_plan(NodeId member, const Superframe& sf);

/// Records scheduled-window transmissions and reports overlaps between
/// protocol-compliant senders on the same channel.
class CollisionAuditor {
 public:
  void record(NodeId channel, NodeId sender, Interval tx, bool compliant);
  std::uint64_t compliant_collisions() const;
  std::uint64_t recorded() const { return count_; }

 private:
  struct Tx {
    NodeId channel;
    NodeId sender;
    Interval when;
    bool compliant;
  };
  std::vector<Tx> log_;
  std::uint64_t count_ = 0;
};

}  // namespace swarmnet::mac
