#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swarmnet/types.hpp"

namespace swarmnet::trust {

enum class Verdict { kPositive, kNegative };

/// Order in which an update applies the evidence increment and the time decay.
enum class DecayOrder {
  kIncrementThenDecay,  // the published update algorithm, literally
  kDecayThenIncrement,  // decay old evidence first, then add the new event
};

/// Beta(alpha, beta) evidence about one peer.
struct TrustRecord {
  double alpha = 1.0;
  double beta = 1.0;
  SimTime last_update;
};

struct TrustParams {
  double delta_alpha = 1.0;
  double delta_beta = 2.0;
  double lambda = 0.01;  // 1/s
  double isolation_threshold = 0.4;
  double prior_alpha = 1.0;
  double prior_beta = 1.0;
  DecayOrder order = DecayOrder::kIncrementThenDecay;

  std::vector<std::string> validate() const;
};

inline TrustRecord prior_record(const TrustParams& p, SimTime at) {
  return TrustRecord{p.prior_alpha, p.prior_beta, at};
}

/// E[T] = alpha / (alpha + beta).
double expected_trust(const TrustRecord& r);

/// Multiplies both evidence counts by exp(-lambda * (now - last_update)).
TrustRecord decay(const TrustRecord& r, SimTime now, const TrustParams& p);

/// One observed event. Throws HardFault when `now` precedes the last update.
TrustRecord update(const TrustRecord& r, Verdict event, SimTime now, const TrustParams& p);

bool is_isolated(const TrustRecord& r, const TrustParams& p);

/// A node's private view of its peers, indexed by NodeId.
class TrustTable {
 public:
  explicit TrustTable(std::size_t fleet_size = 0) : records_(fleet_size) {}

  const std::optional<TrustRecord>& find(NodeId peer) const { return records_.at(peer); }
  bool has(NodeId peer) const { return records_.at(peer).has_value(); }

  /// Creates the record from the prior on first contact, then applies the event.
  const TrustRecord& observe(NodeId peer, Verdict v, SimTime now, const TrustParams& p);

  /// Expected trust, or the prior mean when the peer was never observed.
  double score(NodeId peer, const TrustParams& p) const;
  /// True only for observed peers whose score is below the threshold.
  bool distrusts(NodeId peer, const TrustParams& p) const;

  std::size_t size() const { return records_.size(); }

 private:
  std::vector<std::optional<TrustRecord>> records_;
};

}  // namespace swarmnet::trust
