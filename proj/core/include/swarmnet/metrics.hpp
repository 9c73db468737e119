#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmnet/frame.hpp"
#include "swarmnet/types.hpp"

namespace swarmnet::metrics {

enum class DropReason {
  kRetryExhausted,
  kQueueOverflow,
  kNoRoute,
  kMaliciousDrop,
  kNodeDead,
  kAuthFailure,
  kNoSlot,
};
std::string to_string(DropReason r);
inline constexpr std::size_t kDropReasonCount = 7;

struct PacketRecord {
  std::uint64_t id = 0;
  NodeId origin = 0;
  NodeId destination = 0;
  SimTime sent_at;
  std::optional<SimTime> delivered_at;
  std::optional<DropReason> drop_reason;
  std::size_t bytes = 0;
  std::uint16_t hops = 0;

  bool terminal() const { return delivered_at.has_value() || drop_reason.has_value(); }
};

/// Application packet ledger. Each packet ends in exactly one of delivered,
/// dropped(reason) or in flight.
class PacketLedger {
 public:
  std::uint64_t send(NodeId origin, NodeId destination, SimTime at, std::size_t bytes);
  void deliver(std::uint64_t id, SimTime at);
  void drop(std::uint64_t id, DropReason reason);
  void hop(std::uint64_t id) { ++records_.at(id).hops; }

  const PacketRecord& at(std::uint64_t id) const { return records_.at(id); }
  const std::vector<PacketRecord>& records() const { return records_; }
  std::uint64_t sent() const { return records_.size(); }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t in_flight() const { return sent() - delivered_ - dropped_; }
  std::uint64_t dropped(DropReason r) const { return by_reason_[static_cast<std::size_t>(r)]; }

  /// Recounts terminal states from the records and throws HardFault if
  /// sent != delivered + dropped + in_flight or the running counters disagree.
  void audit() const;

 private:
  std::vector<PacketRecord> records_;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t by_reason_[kDropReasonCount] = {};
};

/// delivered / sent; empty when nothing was sent.
std::optional<double> pdr(const PacketLedger& ledger);

struct DelayStats {
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
};

/// Nearest-rank p95; median averages the middle pair on even counts.
std::optional<DelayStats> delay_stats(const std::vector<double>& delays_ms);
std::optional<DelayStats> delay_stats(const PacketLedger& ledger);

/// Byte accounting by class, fed one frame at a time.
struct OverheadCounters {
  std::uint64_t beacon = 0;
  std::uint64_t schedule = 0;
  std::uint64_t trust_update = 0;
  std::uint64_t security_trailer = 0;  // nonce + tag + signature of every frame
  std::uint64_t data = 0;              // header + body of data frames
  std::uint64_t frames = 0;

  void add(const frame::WireSize& w);
  std::uint64_t overhead() const { return beacon + schedule + trust_update + security_trailer; }
  std::uint64_t total() const { return overhead() + data; }
};

/// Second, independent accounting: per-frame overhead() and total() summed.
struct FrameTally {
  std::uint64_t overhead = 0;
  std::uint64_t total = 0;
  void add(const frame::WireSize& w) {
    overhead += w.overhead();
    total += w.total();
  }
};

/// 0 when nothing was transmitted.
double overhead_fraction(std::uint64_t overhead_bytes, std::uint64_t total_bytes);

struct DetectionSummary {
  std::size_t malicious = 0;
  std::size_t flagged_malicious = 0;
  std::size_t benign = 0;
  std::size_t flagged_benign = 0;
  std::optional<double> detection_rate;       // empty without malicious nodes
  std::optional<double> false_positive_rate;  // empty without benign nodes
};

DetectionSummary detection_rate(const std::vector<bool>& malicious, const std::vector<bool>& flagged);

struct Lifetime {
  std::optional<double> first_death_s;
  std::optional<double> half_death_s;
};

/// Death times (seconds) of the nodes that died; `fleet` is the node count.
Lifetime lifetime(std::vector<double> death_times_s, std::size_t fleet);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t n = 0;
};
MeanStd mean_std(const std::vector<double>& xs);

}  // namespace swarmnet::metrics
