#include "swarmnet/adversary.hpp"

#include <cmath>

namespace swarmnet::adversary {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::kBlackhole: return "blackhole";
    case Kind::kGrayhole: return "grayhole";
    case Kind::kMacViolator: return "mac-violator";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(const std::string& s) {
  if (s == "blackhole") return Kind::kBlackhole;
  if (s == "grayhole") return Kind::kGrayhole;
  if (s == "mac-violator") return Kind::kMacViolator;
  return std::nullopt;
}

std::string to_string(Cause c) {
  switch (c) {
    case Cause::kForwarded: return "forwarded";
    case Cause::kDropped: return "dropped";
    case Cause::kMacViolation: return "mac-violation";
    case Cause::kAuthFailure: return "auth-failure";
  }
  return "unknown";
}

std::vector<std::string> AdversaryProfile::validate() const {
  std::vector<std::string> errors;
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) errors.emplace_back("drop_prob must lie in [0, 1]");
  if (!(violation_rate >= 0.0)) errors.emplace_back("violation_rate must be >= 0");
  if (kind == Kind::kBlackhole && drop_prob != 1.0)
    errors.emplace_back("a blackhole has drop_prob = 1");
  if (kind == Kind::kGrayhole && drop_prob == 1.0)
    errors.emplace_back("a grayhole with drop_prob = 1 is a blackhole");
  return errors;
}

RelayAction apply_behavior(const AdversaryProfile* profile, SimTime now, RngStream& rng) {
  if (profile == nullptr || !profile->active(now) || profile->drop_prob <= 0.0)
    return RelayAction::kForward;
  if (profile->drop_prob >= 1.0) return RelayAction::kDrop;
  return rng.bernoulli(profile->drop_prob) ? RelayAction::kDrop : RelayAction::kForward;
}

int violation_attempts(const AdversaryProfile* profile, SimTime now, RngStream& rng) {
  if (profile == nullptr || !profile->active(now) || profile->violation_rate <= 0.0) return 0;
  const double whole = std::floor(profile->violation_rate);
  const double frac = profile->violation_rate - whole;
  int n = static_cast<int>(whole);
  if (frac > 0.0 && rng.bernoulli(frac)) ++n;
  return n;
}

std::optional<Observation> observe_forwarding(NodeId observer, NodeId subject, bool overheard,
                                              bool timeout_expired, bool link_up, SimTime now) {
  if (observer == subject) return std::nullopt;
  if (overheard)
    return Observation{observer, subject, trust::Verdict::kPositive, Cause::kForwarded, now};
  if (timeout_expired && link_up)
    return Observation{observer, subject, trust::Verdict::kNegative, Cause::kDropped, now};
  return std::nullopt;
}

bool quorum_flags(const std::vector<double>& scores, const FlagRule& rule) {
  if (scores.empty()) return false;
  std::size_t below = 0;
  for (double s : scores) {
    if (s < rule.threshold) ++below;
  }
  return static_cast<double>(below) >= rule.quorum * static_cast<double>(scores.size());
}

std::vector<double> peer_scores(const std::vector<trust::TrustTable>& tables, NodeId subject) {
  std::vector<double> out;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i == subject) continue;
    const auto& rec = tables[i].find(subject);
    if (rec) out.push_back(trust::expected_trust(*rec));
  }
  return out;
}

void DetectionTracker::refresh(const std::vector<trust::TrustTable>& tables, const FlagRule& rule,
                               SimTime now) {
  for (auto& e : entries_) {
    e.flagged = quorum_flags(peer_scores(tables, e.node), rule);
    if (e.flagged && !e.flagged_at) e.flagged_at = now;
  }
}

}  // namespace swarmnet::adversary
