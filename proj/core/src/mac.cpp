#include "swarmnet/mac.hpp"

#include <algorithm>
#include <numeric>

namespace swarmnet::mac {

std::vector<std::string> MacConfig::validate() const {
  std::vector<std::string> errors;
  if (frame_len().us() <= 0) errors.emplace_back("superframe length must be > 0");
  if (backoff_slot.us() <= 0) errors.emplace_back("mac.backoff_slot must be > 0");
  if (cw_min < 1 || cw_max < cw_min) errors.emplace_back("mac requires 1 <= cw_min <= cw_max");
  if (retry_limit < 0) errors.emplace_back("mac.retry_limit must be >= 0");
  return errors;
}

std::optional<Interval> Superframe::slot_of(NodeId member) const {
  const auto base = scheduled().begin;
  for (const auto& s : slots) {
    if (s.member == member) return Interval{base + s.offset, base + s.offset + s.length};
  }
  return std::nullopt;
}

bool Superframe::tiles() const {
  if (contention().end != scheduled().begin) return false;
  if (scheduled().end != broadcast().begin) return false;
  if (broadcast().end != start + frame_len()) return false;
  std::vector<Interval> taken;
  for (const auto& s : slots) {
    if (s.offset + s.length > scheduled_len) return false;
    Interval iv{s.offset, s.offset + s.length};
    for (const auto& o : taken) {
      if (iv.overlaps(o)) return false;
    }
    taken.push_back(iv);
  }
  return true;
}

Superframe build_superframe(NodeId head, const std::vector<NodeId>& members, const MacConfig& cfg,
                            SimTime start, const std::vector<std::size_t>* backlog) {
  Superframe sf;
  sf.head = head;
  sf.start = start;
  sf.contention_len = cfg.contention_len;
  sf.broadcast_len = cfg.broadcast_len;
  if (members.empty()) {
    // Idle scheduled time folds into the contention window so the frame
    // length (and with it the swarm-wide timing) stays fixed.
    sf.contention_len = cfg.contention_len + cfg.scheduled_len;
    sf.scheduled_len = SimTime{};
    return sf;
  }
  sf.scheduled_len = cfg.scheduled_len;

  const auto n = static_cast<std::int64_t>(members.size());
  std::vector<std::int64_t> shares(members.size(), 1);
  if (cfg.slots_by_backlog && backlog != nullptr && backlog->size() == members.size()) {
    for (std::size_t i = 0; i < members.size(); ++i)
      shares[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>((*backlog)[i]));
  }
  const std::int64_t total_shares = std::accumulate(shares.begin(), shares.end(), std::int64_t{0});
  const std::int64_t unit = cfg.scheduled_len.us() / (total_shares > 0 ? total_shares : n);

  std::int64_t offset = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::int64_t span = unit * shares[i];
    const std::int64_t usable = std::max<std::int64_t>(0, span - cfg.guard.us());
    sf.slots.push_back(Slot{members[i], SimTime::from_us(offset), SimTime::from_us(usable)});
    offset += span;
  }
  return sf;
}

BackoffState fresh_backoff(const MacConfig& cfg) { return BackoffState{cfg.cw_min, 0, 0}; }

void draw_backoff(BackoffState& s, RngStream& rng) {
  s.backoff_remaining = static_cast<int>(rng.uniform_int(0, s.cw - 1));
}

CsmaDecision csma_attempt(BackoffState& s, bool channel_busy, bool fits_in_window) {
  if (channel_busy) return CsmaDecision::kWait;
  if (s.backoff_remaining == 0) return fits_in_window ? CsmaDecision::kTransmit : CsmaDecision::kDefer;
  --s.backoff_remaining;
  return CsmaDecision::kWait;
}

bool on_tx_failure(BackoffState& s, RngStream& rng, const MacConfig& cfg) {
  if (s.retries >= cfg.retry_limit) {
    s = fresh_backoff(cfg);
    draw_backoff(s, rng);
    return true;
  }
  ++s.retries;
  s.cw = std::min(2 * s.cw, cfg.cw_max);
  draw_backoff(s, rng);
  return false;
}

void on_tx_success(BackoffState& s, RngStream& rng, const MacConfig& cfg) {
  s = fresh_backoff(cfg);
  draw_backoff(s, rng);
}

std::size_t frames_per_slot(SimTime slot_len, SimTime airtime) {
  if (airtime.us() <= 0) return 0;
  return static_cast<std::size_t>(slot_len.us() / airtime.us());
}

SlotCheck check_transmission(const Superframe& sf, NodeId sender, Interval tx) {
  const auto own = sf.slot_of(sender);
  if (own && tx.begin >= own->begin && tx.end <= own->end) return SlotCheck::kCompliant;
  return SlotCheck::kViolation;
}

std::vector<Interval> sleep_plan(NodeId member, const Superframe& sf) {
  std::vector<Interval> out;
  if (member == sf.head) return out;
  const auto own = sf.slot_of(member);
  if (!own) return out;
  const auto win = sf.scheduled();
  if (own->begin > win.begin) out.push_back({win.begin, own->begin});
  if (own->end < win.end) out.push_back({own->end, win.end});
  return out;
}

void CollisionAuditor::record(NodeId channel, NodeId sender, Interval tx, bool compliant) {
  log_.push_back(Tx{channel, sender, tx, compliant});
  ++count_;
}

std::uint64_t CollisionAuditor::compliant_collisions() const {
  std::vector<const Tx*> comp;
  comp.reserve(log_.size());
  for (const auto& t : log_) {
    if (t.compliant) comp.push_back(&t);
  }
  std::sort(comp.begin(), comp.end(), [](const Tx* a, const Tx* b) {
    if (a->channel != b->channel) return a->channel < b->channel;
    return a->when.begin < b->when.begin;
  });
  std::uint64_t collisions = 0;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    for (std::size_t j = i + 1; j < comp.size(); ++j) {
      if (comp[j]->channel != comp[i]->channel) break;
      if (comp[j]->when.begin >= comp[i]->when.end) break;
      if (comp[j]->sender != comp[i]->sender) ++collisions;
    }
  }
  return collisions;
}

}  // namespace swarmnet::mac
