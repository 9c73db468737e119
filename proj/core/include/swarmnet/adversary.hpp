#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swarmnet/engine.hpp"
#include "swarmnet/trust.hpp"
#include "swarmnet/types.hpp"

namespace swarmnet::adversary {

enum class Kind { kBlackhole, kGrayhole, kMacViolator };
std::string to_string(Kind k);
std::optional<Kind> parse_kind(const std::string& s);

struct AdversaryProfile {
  Kind kind = Kind::kBlackhole;
  double drop_prob = 1.0;
  double violation_rate = 0.0;  // attempts per superframe
  SimTime active_from;
  // Advertise E = C = 1 in elections to attract traffic.
  bool inflate_candidacy = true;

  std::vector<std::string> validate() const;
  bool active(SimTime now) const { return now >= active_from; }
};

enum class RelayAction { kForward, kDrop };

/// Drop decision for a frame the node has accepted for relay or collection.
/// No random draw is consumed when the outcome is certain, which keeps a
/// drop_prob = 0 profile bit-identical to a benign node.
RelayAction apply_behavior(const AdversaryProfile* profile, SimTime now, RngStream& rng);

/// Number of out-of-slot attempts this superframe (integer part plus one
/// Bernoulli draw on the fractional part; no draw when it is zero).
int violation_attempts(const AdversaryProfile* profile, SimTime now, RngStream& rng);

enum class Cause { kForwarded, kDropped, kMacViolation, kAuthFailure };
std::string to_string(Cause c);

struct Observation {
  NodeId observer = 0;
  NodeId subject = 0;
  trust::Verdict verdict = trust::Verdict::kPositive;
  Cause cause = Cause::kForwarded;
  SimTime at;
};

/// Watchdog outcome. `link_up` is whether the observer could have heard the
/// subject; without it a timeout is inconclusive.
std::optional<Observation> observe_forwarding(NodeId observer, NodeId subject, bool overheard,
                                              bool timeout_expired, bool link_up, SimTime now);

struct FlagRule {
  double threshold = 0.4;
  double quorum = 0.5;
};

/// Quorum test over the scores peers hold on one subject (>= is inclusive).
/// No peers means not flagged.
bool quorum_flags(const std::vector<double>& peer_scores, const FlagRule& rule);

/// Scores held on `subject` by every node that keeps a record on it.
std::vector<double> peer_scores(const std::vector<trust::TrustTable>& tables, NodeId subject);

struct DetectionEntry {
  NodeId node = 0;
  bool flagged = false;
  std::optional<SimTime> flagged_at;
};

/// Harness-side view. Protocol code never sees profiles; this only reads
/// trust tables.
class DetectionTracker {
 public:
  explicit DetectionTracker(std::size_t fleet) : entries_(fleet) {
    for (std::size_t i = 0; i < fleet; ++i) entries_[i].node = static_cast<NodeId>(i);
  }
  void refresh(const std::vector<trust::TrustTable>& tables, const FlagRule& rule, SimTime now);
  const std::vector<DetectionEntry>& status() const { return entries_; }
  bool flagged(NodeId n) const { return entries_.at(n).flagged; }

 private:
  std::vector<DetectionEntry> entries_;
};

}  // namespace swarmnet::adversary
