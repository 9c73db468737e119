#include "swarmnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace swarmnet::metrics {

std::string to_string(DropReason r) {
  switch (r) {
    case DropReason::kRetryExhausted: return "retry-exhausted";
    case DropReason::kQueueOverflow: return "queue-overflow";
    case DropReason::kNoRoute: return "no-route";
    case DropReason::kMaliciousDrop: return "malicious-drop";
    case DropReason::kNodeDead: return "node-dead";
    case DropReason::kAuthFailure: return "auth-failure";
    case DropReason::kNoSlot: return "no-slot";
  }
  return "unknown";
}

std::uint64_t PacketLedger::send(NodeId origin, NodeId destination, SimTime at, std::size_t bytes) {
  const std::uint64_t id = records_.size();
  PacketRecord r;
  r.id = id;
  r.origin = origin;
  r.destination = destination;
  r.sent_at = at;
  r.bytes = bytes;
  records_.push_back(r);
  return id;
}

void PacketLedger::deliver(std::uint64_t id, SimTime at) {
  auto& r = records_.at(id);
  if (r.terminal()) throw HardFault("packet reached a second terminal state");
  if (at < r.sent_at) throw HardFault("packet delivered before it was sent");
  r.delivered_at = at;
  ++delivered_;
}

void PacketLedger::drop(std::uint64_t id, DropReason reason) {
  auto& r = records_.at(id);
  if (r.terminal()) throw HardFault("packet reached a second terminal state");
  r.drop_reason = reason;
  ++dropped_;
  ++by_reason_[static_cast<std::size_t>(reason)];
}

void PacketLedger::audit() const {
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t open = 0;
  for (const auto& r : records_) {
    if (r.delivered_at && r.drop_reason) throw HardFault("packet both delivered and dropped");
    if (r.delivered_at)
      ++delivered;
    else if (r.drop_reason)
      ++dropped;
    else
      ++open;
  }
  std::uint64_t reasons = 0;
  for (auto c : by_reason_) reasons += c;
  if (delivered != delivered_ || dropped != dropped_ || reasons != dropped_ ||
      delivered + dropped + open != sent())
    throw HardFault("packet conservation violated");
}

std::optional<double> pdr(const PacketLedger& ledger) {
  if (ledger.sent() == 0) return std::nullopt;
  return static_cast<double>(ledger.delivered()) / static_cast<double>(ledger.sent());
}

std::optional<DelayStats> delay_stats(const std::vector<double>& delays_ms) {
  if (delays_ms.empty()) return std::nullopt;
  std::vector<double> v = delays_ms;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  DelayStats s;
  s.mean_ms = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  s.median_ms = n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95_ms = v[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

std::optional<DelayStats> delay_stats(const PacketLedger& ledger) {
  std::vector<double> d;
  d.reserve(ledger.delivered());
  for (const auto& r : ledger.records()) {
    if (r.delivered_at) d.push_back((*r.delivered_at - r.sent_at).ms());
  }
  return delay_stats(d);
}

void OverheadCounters::add(const frame::WireSize& w) {
  ++frames;
  security_trailer += w.trailer();
  const std::uint64_t body = w.header + w.body;
  switch (w.type) {
    case frame::FrameType::kBeacon: beacon += body; break;
    case frame::FrameType::kSchedule: schedule += body; break;
    case frame::FrameType::kTrustUpdate: trust_update += body; break;
    case frame::FrameType::kData: data += body; break;
  }
}

double overhead_fraction(std::uint64_t overhead_bytes, std::uint64_t total_bytes) {
  if (total_bytes == 0) return 0.0;
  return static_cast<double>(overhead_bytes) / static_cast<double>(total_bytes);
}

DetectionSummary detection_rate(const std::vector<bool>& malicious, const std::vector<bool>& flagged) {
  DetectionSummary s;
  for (std::size_t i = 0; i < malicious.size(); ++i) {
    const bool f = i < flagged.size() && flagged[i];
    if (malicious[i]) {
      ++s.malicious;
      if (f) ++s.flagged_malicious;
    } else {
      ++s.benign;
      if (f) ++s.flagged_benign;
    }
  }
  if (s.malicious > 0)
    s.detection_rate = static_cast<double>(s.flagged_malicious) / static_cast<double>(s.malicious);
  if (s.benign > 0)
    s.false_positive_rate = static_cast<double>(s.flagged_benign) / static_cast<double>(s.benign);
  return s;
}

Lifetime lifetime(std::vector<double> deaths, std::size_t fleet) {
  Lifetime out;
  if (deaths.empty()) return out;
  std::sort(deaths.begin(), deaths.end());
  out.first_death_s = deaths.front();
  const std::size_t half = (fleet + 1) / 2;
  if (half >= 1 && deaths.size() >= half) out.half_death_s = deaths[half - 1];
  return out;
}

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  m.n = xs.size();
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

}  // namespace swarmnet::metrics
