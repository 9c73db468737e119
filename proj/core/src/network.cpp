#include "swarmnet/network.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "swarmnet/adversary.hpp"
#include "swarmnet/channel.hpp"
#include "swarmnet/clustering.hpp"
#include "swarmnet/energy.hpp"
#include "swarmnet/engine.hpp"
#include "swarmnet/frame.hpp"
#include "swarmnet/mac.hpp"
#include "swarmnet/mobility.hpp"
#include "swarmnet/security.hpp"
#include "swarmnet/trust.hpp"

namespace swarmnet {

std::vector<int> assign_adversaries(const Scenario& s, std::uint64_t seed) {
  std::vector<int> roster(s.node_count, -1);
  for (std::size_t g = 0; g < s.adversaries.size(); ++g) {
    for (NodeId n : s.adversaries[g].nodes) roster.at(n) = static_cast<int>(g);
  }
  std::vector<NodeId> pool;
  for (std::size_t i = 0; i < s.node_count; ++i) {
    if (roster[i] < 0) pool.push_back(static_cast<NodeId>(i));
  }
  RngStream rng(seed, "adversary-roster");
  for (std::size_t i = pool.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(pool[i - 1], pool[j]);
  }
  std::size_t next = 0;
  for (std::size_t g = 0; g < s.adversaries.size(); ++g) {
    const auto& group = s.adversaries[g];
    if (!group.nodes.empty()) continue;
    const auto count = static_cast<std::size_t>(
        std::llround(group.fraction * static_cast<double>(s.node_count)));
    for (std::size_t k = 0; k < count && next < pool.size(); ++k) roster[pool[next++]] = static_cast<int>(g);
  }
  return roster;
}

namespace {

using energy::RadioState;
using frame::FrameType;
using metrics::DropReason;
using security::Bytes;

constexpr NodeId kNone = kBroadcast;

enum class EvKind : std::uint8_t { kSuperframe, kContentionTick, kSlotStart, kTxEnd, kBroadcast };

struct Ev {
  EvKind kind = EvKind::kSuperframe;
  std::uint32_t ref = 0;
};

enum class Target : std::uint8_t { kHead, kLeader };

struct QueuedPacket {
  std::uint64_t id = 0;
  Target target = Target::kHead;
  SimTime ready_at;
  int attempts = 0;
  NodeId sealed_for = kNone;
  security::SecureEnvelope env;
  Bytes aad;
};

struct TxRecord {
  NodeId sender = 0;
  NodeId receiver = kNone;
  NodeId channel = 0;
  mac::Interval when;
  FrameType type = FrameType::kData;
  frame::WireSize size;
  bool scheduled_window = false;
  std::optional<QueuedPacket> packet;
  std::size_t trust_events = 0;
};

struct Watch {
  NodeId observer = 0;
  NodeId subject = 0;
  std::uint64_t packet = 0;
  SimTime deadline;
};

struct Node {
  NodeId id = 0;
  const adversary::AdversaryProfile* profile = nullptr;
  mobility::MobilityState mob;
  Vec3 pos;
  energy::EnergyLedger energy;
  std::vector<std::pair<mac::Interval, RadioState>> activity;
  double processing_s = 0.0;

  NodeId head = kNone;  // own id when a head; kNone when orphaned or isolated
  bool isolated = false;
  std::deque<QueuedPacket> uplink;
  std::deque<QueuedPacket> relay;

  mac::BackoffState backoff;
  bool backoff_armed = false;
  NodeId relay_next_hop = kNone;
  std::size_t pending_trust_events = 0;
  SimTime busy_until;

  security::NonceGuard nonces;
  trust::TrustTable trust;
  int missed_beacons = 0;
  int delivered_this_sf = 0;
  std::map<NodeId, clustering::LinkQuality> link_quality;
  int hops_to_leader = -1;

  RngStream mobility_rng;
  RngStream traffic_rng;
  RngStream mac_rng;
  RngStream adversary_rng;
  SimTime phase;
  std::uint32_t frame_seq = 0;

  Node(NodeId i, std::size_t fleet, std::uint64_t seed)
      : id(i),
        nonces(i),
        trust(fleet),
        mobility_rng(seed, "mobility", i),
        traffic_rng(seed, "traffic", i),
        mac_rng(seed, "mac", i),
        adversary_rng(seed, "adversary", i) {}

  bool alive() const { return energy.alive; }
  bool is_head() const { return head == id; }
  bool malicious() const { return profile != nullptr; }
};

struct ClusterState {
  NodeId head = 0;
  std::vector<NodeId> members;
  double score_at_election = 0.0;
  mac::Superframe sf;
  bool schedule_dirty = true;
  std::set<NodeId> acked;
};

class World {
 public:
  World(const Scenario& s, std::uint64_t seed, const RunOptions& opts)
      : s_(s),
        seed_(seed),
        opts_(opts),
        n_(s.node_count),
        frame_len_(s.mac.frame_len()),
        horizon_(SimTime::from_seconds(s.duration_s)),
        fading_rng_(seed, "fading"),
        backend_(security::make_backend(s.security.backend, s.node_count, seed)),
        detection_(s.node_count) {
    r_neighbor_ = channel::range_for_margin(s.channel, s.clustering.neighbor_margin_db);
    r_overlay_ = channel::range_for_margin(s.channel, s.clustering.overlay_margin_db);
    r_sense_ = channel::range_for_margin(s.channel, 0.0);
    data_body_ = frame::data_body(s.traffic.packet_bytes);
    data_size_ = frame::wire_size(FrameType::kData, data_body_);
    data_air_ = airtime(data_size_.total());

    const auto roster = assign_adversaries(s, seed);
    nodes_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      nodes_.emplace_back(static_cast<NodeId>(i), n_, seed);
      Node& nd = nodes_.back();
      if (roster[i] >= 0) nd.profile = &s.adversaries[static_cast<std::size_t>(roster[i])].profile;
      const Vec3 start = mobility::uniform_position(nd.mobility_rng, s.area);
      nd.mob = mobility::start_leg(nd.mobility_rng, s.area, s.mobility.speed, s.mobility.pause, start,
                                   SimTime{});
      nd.pos = start;
      nd.energy = energy::make_ledger(s.energy, SimTime{}, RadioState::kIdle);
      nd.backoff = mac::fresh_backoff(s.mac);
      nd.phase = SimTime::from_us(nd.traffic_rng.uniform_int(0, frame_len_.us() - 1));
    }
    malicious_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) malicious_[i] = nodes_[i].malicious();
    by_channel_.resize(n_);
  }

  RunOutput run() {
    queue_.schedule(SimTime{}, Ev{EvKind::kSuperframe, 0});
    const auto outcome = run_until(
        queue_, horizon_, [&](const Event<Ev>& e) { dispatch(e); }, [&] { return stop_; });
    return finish(outcome);
  }

 private:
  // ---------------------------------------------------------------- helpers

  SimTime now() const { return queue_.now(); }

  SimTime airtime(std::size_t bytes) const {
    return SimTime::from_us(
        static_cast<std::int64_t>(std::llround(channel::airtime_seconds(bytes, s_.channel) * 1e6)));
  }

  double dist(NodeId a, NodeId b) const { return distance(nodes_[a].pos, nodes_[b].pos); }

  bool audible(NodeId from, NodeId to) const {
    return channel::mean_rx_dbm(dist(from, to), s_.channel) >= s_.channel.sensitivity_dbm;
  }

  bool trust_on() const { return s_.trust.enabled; }

  SimTime delay(security::CryptoOp op, std::size_t bytes = 0) const {
    return security::processing_delay(op, bytes, s_.security.timing);
  }

  void charge(Node& nd, security::CryptoOp op, std::size_t bytes = 0) {
    nd.processing_s += delay(op, bytes).seconds();
  }

  const security::SessionKey& session(NodeId a, NodeId b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = sessions_.find(key);
    if (it == sessions_.end()) {
      auto k = backend_->derive_session_key(a, b, now());
      if (!k) throw HardFault("session key unavailable for a provisioned pair");
      it = sessions_.emplace(key, *k).first;
    }
    return it->second;
  }

  void trace(nlohmann::json j) {
    if (opts_.trace == nullptr) return;
    j["t_us"] = now().us();
    *opts_.trace << j.dump() << '\n';
  }

  void account(const frame::WireSize& w) {
    overhead_.add(w);
    tally_.add(w);
  }

  void drop(std::uint64_t id, DropReason why) {
    ledger_.drop(id, why);
    trace({{"ev", "drop"}, {"packet", id}, {"reason", metrics::to_string(why)}});
  }

  void deliver(std::uint64_t id, SimTime at) {
    ledger_.deliver(id, at);
    trace({{"ev", "deliver"}, {"packet", id}, {"delivered_us", at.us()}});
  }

  Bytes header_bytes(FrameType type, NodeId src, NodeId dst, std::uint32_t seq, std::size_t trailer) {
    Bytes out;
    frame::encode_header({type, src, dst, seq, static_cast<std::uint16_t>(trailer)}, out);
    return out;
  }

  Bytes packet_body(std::uint64_t id, NodeId origin) const {
    Bytes body(data_body_, 0);
    for (std::size_t i = 0; i < 8 && i < body.size(); ++i) body[i] = static_cast<std::uint8_t>(id >> (8 * i));
    if (body.size() >= 10) {
      body[8] = static_cast<std::uint8_t>(origin);
      body[9] = static_cast<std::uint8_t>(origin >> 8);
    }
    return body;
  }

  static std::uint64_t body_packet_id(const Bytes& body) {
    std::uint64_t id = 0;
    for (std::size_t i = 0; i < 8 && i < body.size(); ++i) id |= static_cast<std::uint64_t>(body[i]) << (8 * i);
    return id;
  }

  /// Seals (or re-seals) a queued packet for `receiver`.
  void seal_for(Node& sender, QueuedPacket& p, NodeId receiver) {
    if (p.sealed_for == receiver) return;
    const auto& rec = ledger_.at(p.id);
    p.aad = header_bytes(FrameType::kData, sender.id, receiver, sender.frame_seq++, data_size_.trailer());
    const Bytes body = packet_body(p.id, rec.origin);
    p.env = security::seal_fresh(*backend_, sender.nonces, session(sender.id, receiver), receiver, body, p.aad);
    p.sealed_for = receiver;
  }

  // ------------------------------------------------------------ dispatcher

  void dispatch(const Event<Ev>& e) {
    ++events_;
    switch (e.payload.kind) {
      case EvKind::kSuperframe: on_superframe(); break;
      case EvKind::kContentionTick: on_contention_tick(); break;
      case EvKind::kSlotStart: on_slot_start(static_cast<NodeId>(e.payload.ref)); break;
      case EvKind::kTxEnd: on_tx_end(e.payload.ref); break;
      case EvKind::kBroadcast: on_broadcast(); break;
    }
  }

  // ------------------------------------------------------------ superframe

  void on_superframe() {
    const SimTime t0 = now();
    if (sf_index_ > 0) close_superframe(sf_start_, t0);
    sf_start_ = t0;
    ++sf_index_;
    txs_.clear();
    for (auto& v : by_channel_) v.clear();

    for (auto& nd : nodes_) {
      if (!nd.alive()) continue;
      while (nd.mob.leg_end() <= t0) {
        const Vec3 at = mobility::position_at(nd.mob, nd.mob.leg_end());
        nd.mob = mobility::start_leg(nd.mobility_rng, s_.area, s_.mobility.speed, s_.mobility.pause, at,
                                     nd.mob.leg_end());
      }
      nd.pos = mobility::position_at(nd.mob, t0);
    }

    if (s_.stop_rule == StopRule::kHalfDead && alive_count() * 2 < n_) {
      stop_ = true;
      return;
    }

    expire_watches(t0);
    check_abdication();
    const bool periodic = t0 >= next_periodic_election_;
    const bool gap_ok = !last_election_ || t0 - *last_election_ >= SimTime::from_seconds(s_.clustering.min_election_gap_s);
    if (!last_election_ || periodic || (election_pending_ && gap_ok)) run_election(t0);
    reaffiliate_orphans();

    if (t0 >= next_sample_) {
      sample(t0);
      next_sample_ = next_sample_ + SimTime::from_seconds(s_.metrics.sample_interval_s);
    }
    if (!detection_snapshot_ && t0 >= SimTime::from_seconds(s_.detection_horizon())) take_detection_snapshot();

    build_superframes(t0);
    generate_traffic(t0);
    arm_contention(t0);

    for (const auto& [head, cl] : clusters_) {
      for (const auto& slot : cl.sf.slots) {
        const Node& m = nodes_[slot.member];
        if (!m.alive()) continue;
        const bool violator = m.profile != nullptr && m.profile->violation_rate > 0.0;
        if (m.uplink.empty() && !violator) continue;
        queue_.schedule(cl.sf.scheduled().begin + slot.offset, Ev{EvKind::kSlotStart, slot.member});
      }
    }
    queue_.schedule(t0 + s_.mac.contention_len + s_.mac.scheduled_len, Ev{EvKind::kBroadcast, 0});
    const SimTime next = t0 + frame_len_;
    if (next < horizon_) queue_.schedule(next, Ev{EvKind::kSuperframe, 0});
  }

  std::size_t alive_count() const {
    std::size_t c = 0;
    for (const auto& nd : nodes_) c += nd.alive() ? 1 : 0;
    return c;
  }

  // Replays the finished superframe through the energy ledgers.
  void close_superframe(SimTime start, SimTime end) {
    for (auto& nd : nodes_) {
      if (!nd.alive()) {
        nd.activity.clear();
        continue;
      }
      std::vector<mac::Interval> sleeps;
      if (!nd.is_head() && nd.head != kNone) {
        auto it = clusters_.find(nd.head);
        if (it != clusters_.end() && it->second.sf.start == start) sleeps = mac::sleep_plan(nd.id, it->second.sf);
      }
      std::vector<SimTime> cuts{start, end};
      auto clip = [&](const mac::Interval& iv) {
        if (iv.begin > start && iv.begin < end) cuts.push_back(iv.begin);
        if (iv.end > start && iv.end < end) cuts.push_back(iv.end);
      };
      for (const auto& iv : sleeps) clip(iv);
      for (const auto& [iv, st] : nd.activity) clip(iv);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const SimTime a = cuts[k];
        RadioState st = RadioState::kIdle;
        bool tx = false;
        bool rx = false;
        for (const auto& [iv, s] : nd.activity) {
          if (iv.begin <= a && a < iv.end) {
            tx |= s == RadioState::kTx;
            rx |= s == RadioState::kRx;
          }
        }
        if (tx)
          st = RadioState::kTx;
        else if (rx)
          st = RadioState::kRx;
        else {
          for (const auto& iv : sleeps) {
            if (iv.contains(a)) st = RadioState::kSleep;
          }
        }
        energy::transition(nd.energy, st, a, s_.energy);
      }
      energy::transition(nd.energy, RadioState::kIdle, end, s_.energy);
      if (nd.processing_s > 0.0) energy::charge_processing(nd.energy, nd.processing_s, end, s_.energy);
      nd.processing_s = 0.0;
      nd.activity.clear();
      if (!nd.alive()) on_death(nd);
    }
  }

  void on_death(Node& nd) {
    trace({{"ev", "death"}, {"node", nd.id}});
    for (auto& p : nd.uplink) drop(p.id, DropReason::kNodeDead);
    for (auto& p : nd.relay) drop(p.id, DropReason::kNodeDead);
    nd.uplink.clear();
    nd.relay.clear();
    nd.pending_trust_events = 0;
    if (nd.is_head()) {
      for (NodeId m : clusters_[nd.id].members) nodes_[m].head = kNone;
      clusters_.erase(nd.id);
      election_pending_ = true;
    } else if (nd.head != kNone) {
      remove_member(nd.head, nd.id);
    }
    nd.head = kNone;
  }

  void remove_member(NodeId head, NodeId member) {
    auto it = clusters_.find(head);
    if (it == clusters_.end()) return;
    auto& mem = it->second.members;
    mem.erase(std::remove(mem.begin(), mem.end(), member), mem.end());
    it->second.schedule_dirty = true;
  }

  // ------------------------------------------------------------- clustering

  double trust_component(NodeId i) const {
    if (!trust_on()) return 0.5;
    double sum = 0.0;
    std::size_t k = 0;
    for (const auto& other : nodes_) {
      if (other.id == i || !other.alive()) continue;
      const auto& rec = other.trust.find(i);
      if (rec) {
        sum += trust::expected_trust(*rec);
        ++k;
      }
    }
    return k ? sum / static_cast<double>(k) : 0.5;
  }

  std::size_t degree(NodeId i) const {
    std::size_t d = 0;
    for (const auto& other : nodes_) {
      if (other.id != i && other.alive() && dist(i, other.id) <= r_neighbor_) ++d;
    }
    return d;
  }

  bool inflates(const Node& nd) const {
    return nd.profile != nullptr && nd.profile->inflate_candidacy && nd.profile->drop_prob > 0.0 &&
           nd.profile->active(now());
  }

  clustering::CandidacyScore score_of(const Node& nd) const {
    double e = energy::normalized_energy(nd.energy, s_.energy);
    double c = clustering::normalized_connectivity(degree(nd.id), n_);
    if (inflates(nd)) {
      e = 1.0;
      c = 1.0;
    }
    return clustering::make_score(nd.id, trust_component(nd.id), e, c, s_.clustering.weights);
  }

  bool distrusts(NodeId a, NodeId b) const {
    return trust_on() && nodes_[a].trust.distrusts(b, s_.trust.params);
  }

  adversary::FlagRule flag_rule() const {
    return {s_.trust.params.isolation_threshold, s_.trust.quorum};
  }

  void refresh_flags() {
    if (!trust_on()) return;
    std::vector<trust::TrustTable> tables;
    tables.reserve(n_);
    for (const auto& nd : nodes_) tables.push_back(nd.trust);
    detection_.refresh(tables, flag_rule(), now());
  }

  bool flagged(NodeId i) const { return trust_on() && detection_.flagged(i); }

  void run_election(SimTime t0) {
    refresh_flags();
    election_pending_ = false;
    last_election_ = t0;
    next_periodic_election_ = t0 + SimTime::from_seconds(s_.clustering.election_interval_s);
    ++elections_;

    std::vector<clustering::CandidacyScore> cands;
    for (auto& nd : nodes_) {
      nd.isolated = false;
      if (!nd.alive()) continue;
      if (flagged(nd.id)) {
        nd.isolated = true;
        continue;
      }
      cands.push_back(score_of(nd));
    }
    clustering::NeighborGraph g(n_);
    for (std::size_t a = 0; a < cands.size(); ++a) {
      for (std::size_t b = a + 1; b < cands.size(); ++b) {
        const NodeId i = cands[a].node;
        const NodeId j = cands[b].node;
        if (dist(i, j) > r_neighbor_) continue;
        if (distrusts(i, j) || distrusts(j, i)) continue;
        g.add_edge(i, j);
      }
    }
    const auto election = clustering::elect_heads(cands, g, nullptr, s_.clustering.max_members);

    std::map<NodeId, ClusterState> next;
    for (const auto& cl : election.clusters) {
      ClusterState st;
      st.head = cl.head;
      st.members = cl.members;
      st.score_at_election = cl.head_score;
      next[cl.head] = std::move(st);
    }
    for (auto& nd : nodes_) {
      const NodeId old = nd.head;
      if (!nd.alive()) continue;
      if (nd.isolated) {
        nd.head = kNone;
        for (auto& p : nd.uplink) drop(p.id, DropReason::kNoSlot);
        nd.uplink.clear();
        for (auto& p : nd.relay) drop(p.id, DropReason::kNoSlot);
        nd.relay.clear();
        continue;
      }
      auto it = election.head_of.find(nd.id);
      nd.head = it == election.head_of.end() ? kNone : it->second;
      if (nd.head != old) nd.missed_beacons = 0;
      if (!nd.is_head() && !nd.relay.empty()) {
        // A former head hands its relay backlog to its new head via uplink.
        for (auto& p : nd.relay) {
          p.target = Target::kLeader;
          p.sealed_for = kNone;
          nd.uplink.push_back(std::move(p));
        }
        nd.relay.clear();
      }
    }
    clusters_ = std::move(next);
    std::vector<bool> eligible(n_, true);
    leader_ = clustering::swarm_leader(election, &eligible).value_or(kNone);
    refresh_overlay();

    trace({{"ev", "election"}, {"heads", clusters_.size()}, {"leader", leader_}});
    SPDLOG_DEBUG("t={}s election: {} heads, leader {}", t0.seconds(), clusters_.size(), leader_);
  }

  void check_abdication() {
    for (const auto& [head, cl] : clusters_) {
      if (!nodes_[head].alive()) {
        election_pending_ = true;
        continue;
      }
      const double sc = score_of(nodes_[head]).score;
      if (clustering::maybe_abdicate(sc, cl.score_at_election, s_.clustering.abdication_fraction))
        election_pending_ = true;
    }
  }

  void reaffiliate_orphans() {
    for (auto& nd : nodes_) {
      if (!nd.alive() || nd.isolated || nd.head != kNone) continue;
      NodeId best = kNone;
      double best_d = std::numeric_limits<double>::infinity();
      for (auto& [head, cl] : clusters_) {
        if (!nodes_[head].alive() || cl.members.size() >= s_.clustering.max_members) continue;
        if (distrusts(nd.id, head) || distrusts(head, nd.id)) continue;
        const double d = dist(nd.id, head);
        if (d <= r_neighbor_ && d < best_d) {
          best = head;
          best_d = d;
        }
      }
      if (best == kNone) continue;
      nd.head = best;
      nd.missed_beacons = 0;
      clusters_[best].members.push_back(nd.id);
      clusters_[best].schedule_dirty = true;
    }
  }

  /// Head-to-head overlay: BFS hop counts towards the swarm leader.
  void refresh_overlay() {
    for (auto& nd : nodes_) nd.hops_to_leader = -1;
    if (leader_ == kNone) return;
    std::vector<NodeId> heads;
    for (const auto& [h, cl] : clusters_) heads.push_back(h);
    std::deque<NodeId> frontier{leader_};
    nodes_[leader_].hops_to_leader = 0;
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop_front();
      for (NodeId v : heads) {
        if (nodes_[v].hops_to_leader >= 0 || !overlay_link(u, v)) continue;
        nodes_[v].hops_to_leader = nodes_[u].hops_to_leader + 1;
        frontier.push_back(v);
      }
    }
  }

  bool overlay_link(NodeId a, NodeId b) const {
    return a != b && nodes_[a].alive() && nodes_[b].alive() && dist(a, b) <= r_overlay_ &&
           !distrusts(a, b) && !distrusts(b, a);
  }

  NodeId choose_next_hop(const Node& h) {
    if (leader_ == kNone || h.hops_to_leader <= 0) return kNone;
    std::vector<clustering::RelayCandidate> cands;
    for (const auto& [v, cl] : clusters_) {
      const Node& nv = nodes_[v];
      if (nv.hops_to_leader < 0 || nv.hops_to_leader >= h.hops_to_leader) continue;
      if (!overlay_link(h.id, v) || flagged(v)) continue;
      auto lq = h.link_quality.find(v);
      cands.push_back({v, trust_on() ? h.trust.score(v, s_.trust.params) : 0.5,
                       lq == h.link_quality.end() ? 1.0 : lq->second.value, dist(h.id, v)});
    }
    return clustering::next_hop(cands, s_.area.diagonal(), s_.clustering.route).value_or(kNone);
  }

  // ---------------------------------------------------------------- traffic

  void build_superframes(SimTime t0) {
    for (auto& [head, cl] : clusters_) {
      std::vector<NodeId> live;
      for (NodeId m : cl.members) {
        if (nodes_[m].alive()) live.push_back(m);
      }
      if (live.size() != cl.members.size()) {
        cl.members = live;
        cl.schedule_dirty = true;
      }
      std::vector<std::size_t> backlog;
      for (NodeId m : cl.members) backlog.push_back(nodes_[m].uplink.size());
      cl.sf = mac::build_superframe(head, cl.members, s_.mac, t0, &backlog);
      ++superframes_built_;
      if (!cl.sf.tiles() || cl.sf.frame_len() != frame_len_) {
        ++tiling_failures_;
        throw HardFault("superframe does not tile");
      }
    }
  }

  void generate_traffic(SimTime t0) {
    const int per_sf = s_.traffic.packets_per_superframe;
    if (per_sf <= 0) return;
    const std::int64_t spacing = frame_len_.us() / per_sf;
    for (auto& nd : nodes_) {
      if (!nd.alive() || nd.is_head()) continue;
      for (int k = 0; k < per_sf; ++k) {
        const SimTime at = t0 + SimTime::from_us((nd.phase.us() + k * spacing) % frame_len_.us());
        const bool to_leader = nd.traffic_rng.bernoulli(s_.traffic.inter_cluster_fraction);
        if (at >= horizon_) continue;
        const NodeId dst = to_leader ? leader_ : nd.head;
        const auto id = ledger_.send(nd.id, dst, at, s_.traffic.packet_bytes);
        if (nd.isolated) {
          drop(id, DropReason::kNoSlot);
          continue;
        }
        if (nd.uplink.size() >= s_.traffic.queue_limit) {
          drop(id, DropReason::kQueueOverflow);
          continue;
        }
        QueuedPacket p;
        p.id = id;
        p.target = to_leader ? Target::kLeader : Target::kHead;
        p.ready_at = at + delay(security::CryptoOp::kSeal, data_body_);
        charge(nd, security::CryptoOp::kSeal, data_body_);
        nd.uplink.push_back(std::move(p));
      }
    }
  }

  // ------------------------------------------------------- contention window

  bool wants_contention(const Node& nd, SimTime t) const {
    if (!nd.alive()) return false;
    if (nd.pending_trust_events > 0 && nd.head != kNone) return true;
    return nd.is_head() && !nd.relay.empty() && nd.relay.front().ready_at <= t;
  }

  void arm_contention(SimTime t0) {
    contenders_.clear();
    for (auto& nd : nodes_) {
      if (!wants_contention(nd, t0)) continue;
      if (!nd.backoff_armed) {
        nd.backoff = mac::fresh_backoff(s_.mac);
        mac::draw_backoff(nd.backoff, nd.mac_rng);
        nd.backoff_armed = true;
      }
      contenders_.push_back(nd.id);
    }
    if (!contenders_.empty() && s_.mac.contention_len.us() > 0)
      queue_.schedule(t0, Ev{EvKind::kContentionTick, 0});
  }

  bool channel_busy(NodeId ch, NodeId listener, SimTime t) const {
    if (nodes_[listener].busy_until > t) return true;
    for (auto idx : by_channel_[ch]) {
      const auto& tx = txs_[idx];
      if (tx.when.contains(t) && tx.sender != listener && audible(tx.sender, listener)) return true;
    }
    return false;
  }

  struct Pending {
    NodeId node;
    FrameType type;
    NodeId channel;
    NodeId receiver;
    frame::WireSize size;
    std::size_t events = 0;
  };

  std::optional<Pending> head_of_line(Node& nd, SimTime t) {
    if (nd.pending_trust_events > 0 && nd.head != kNone) {
      const std::size_t events = std::min<std::size_t>(nd.pending_trust_events, 8);
      return Pending{nd.id, FrameType::kTrustUpdate, nd.head, kBroadcast,
                     frame::wire_size(FrameType::kTrustUpdate, frame::trust_update_body(events)), events};
    }
    while (nd.is_head() && !nd.relay.empty() && nd.relay.front().ready_at <= t) {
      if (nd.relay_next_hop == kNone || !overlay_link(nd.id, nd.relay_next_hop) ||
          !clusters_.count(nd.relay_next_hop))
        nd.relay_next_hop = choose_next_hop(nd);
      if (nd.relay_next_hop != kNone)
        return Pending{nd.id, FrameType::kData, nd.relay_next_hop, nd.relay_next_hop, data_size_};
      drop(nd.relay.front().id, DropReason::kNoRoute);
      nd.relay.pop_front();
    }
    return std::nullopt;
  }

  void on_contention_tick() {
    const SimTime t = now();
    const SimTime window_end = sf_start_ + s_.mac.contention_len;
    std::vector<Pending> starting;
    std::vector<NodeId> still;
    for (NodeId id : contenders_) {
      Node& nd = nodes_[id];
      if (!nd.alive()) continue;
      if (nd.busy_until > t) {
        still.push_back(id);
        continue;
      }
      auto hol = head_of_line(nd, t);
      if (!hol) {
        nd.backoff_armed = false;
        continue;
      }
      const SimTime air = airtime(hol->size.total());
      const auto d = mac::csma_attempt(nd.backoff, channel_busy(hol->channel, id, t), t + air <= window_end);
      if (d == mac::CsmaDecision::kTransmit)
        starting.push_back(*hol);
      else if (d == mac::CsmaDecision::kWait)
        still.push_back(id);
    }
    for (const auto& p : starting) {
      start_contention_tx(p, t);
      still.push_back(p.node);
    }
    std::sort(still.begin(), still.end());
    contenders_ = still;
    const SimTime next = t + s_.mac.backoff_slot;
    if (!contenders_.empty() && next < window_end) queue_.schedule(next, Ev{EvKind::kContentionTick, 0});
  }

  std::uint32_t push_tx(TxRecord tx) {
    const auto idx = static_cast<std::uint32_t>(txs_.size());
    by_channel_[tx.channel].push_back(idx);
    nodes_[tx.sender].activity.push_back({tx.when, RadioState::kTx});
    nodes_[tx.sender].busy_until = tx.when.end;
    account(tx.size);
    trace({{"ev", "tx"},
           {"packet", tx.packet ? nlohmann::json(tx.packet->id) : nlohmann::json()},
           {"type", frame::to_string(tx.type)},
           {"src", tx.sender},
           {"dst", tx.receiver},
           {"channel", tx.channel},
           {"bytes", tx.size.total()},
           {"end_us", tx.when.end.us()}});
    txs_.push_back(std::move(tx));
    queue_.schedule(txs_[idx].when.end, Ev{EvKind::kTxEnd, idx});
    return idx;
  }

  void start_contention_tx(const Pending& p, SimTime t) {
    Node& nd = nodes_[p.node];
    TxRecord tx;
    tx.sender = p.node;
    tx.receiver = p.receiver;
    tx.channel = p.channel;
    tx.type = p.type;
    tx.size = p.size;
    tx.when = {t, t + airtime(p.size.total())};
    tx.trust_events = p.events;
    if (p.type == FrameType::kData) {
      QueuedPacket& q = nd.relay.front();
      seal_for(nd, q, p.receiver);
      tx.packet = q;
    } else {
      charge(nd, security::CryptoOp::kSign);
    }
    ++contention_tx_;
    push_tx(std::move(tx));
  }

  // ---------------------------------------------------------------- TDMA

  void on_slot_start(NodeId id) {
    Node& m = nodes_[id];
    if (!m.alive() || m.head == kNone || m.is_head()) return;
    auto it = clusters_.find(m.head);
    if (it == clusters_.end()) return;
    const auto slot = it->second.sf.slot_of(id);
    if (!slot || slot->begin != now()) return;
    const int attempts = adversary::violation_attempts(m.profile, now(), m.adversary_rng);
    for (int k = 0; k < attempts; ++k) {
      // Out-of-slot transmissions are caught by the head and never reach the air.
      ++violations_;
      observe({m.head, id, trust::Verdict::kNegative, adversary::Cause::kMacViolation, now()});
    }
    send_next_in_slot(m, *slot);
  }

  void send_next_in_slot(Node& m, const mac::Interval& slot) {
    const SimTime t = now();
    if (m.uplink.empty() || m.uplink.front().ready_at > t) return;
    const SimTime end = t + data_air_;
    if (end > slot.end) return;
    QueuedPacket q = std::move(m.uplink.front());
    m.uplink.pop_front();
    seal_for(m, q, m.head);
    TxRecord tx;
    tx.sender = m.id;
    tx.receiver = m.head;
    tx.channel = m.head;
    tx.type = FrameType::kData;
    tx.size = data_size_;
    tx.when = {t, end};
    tx.scheduled_window = true;
    tx.packet = std::move(q);
    const bool compliant =
        mac::check_transmission(clusters_.at(m.head).sf, m.id, tx.when) == mac::SlotCheck::kCompliant;
    auditor_.record(tx.channel, tx.sender, tx.when, compliant);
    ++scheduled_tx_;
    push_tx(std::move(tx));
  }

  // ------------------------------------------------------------ reception

  /// Collision / half-duplex / fading verdict for `tx` at `rx`.
  bool received(const TxRecord& tx, std::uint32_t idx, NodeId rx) {
    Node& r = nodes_[rx];
    if (!r.alive()) return false;
    for (const auto& [iv, st] : r.activity) {
      if (st == RadioState::kTx && iv.overlaps(tx.when)) return false;
    }
    r.activity.push_back({tx.when, RadioState::kRx});
    for (auto other : by_channel_[tx.channel]) {
      if (other == idx) continue;
      const auto& o = txs_[other];
      if (o.sender != tx.sender && o.sender != rx && o.when.overlaps(tx.when) && audible(o.sender, rx)) {
        if (tx.scheduled_window) ++sched_collisions_;
        else ++contention_collisions_;
        return false;
      }
    }
    const channel::Endpoint a{nodes_[tx.sender].pos, true, false};
    const channel::Endpoint b{r.pos, true, false};
    const auto rec = channel::try_receive(a, b, tx.size.total(), fading_rng_, s_.channel, std::nullopt, &chan_counters_);
    if (!rec.link.delivered) ++fading_losses_;
    return rec.link.delivered;
  }

  enum class Overhear { kHeard, kOutOfRange, kDeaf };

  /// Watchdog listening is judged on the mean link: an observer inside overlay
  /// range hears the forward unless its own radio is transmitting. Fading and
  /// collisions are left out so a lost overhear is not mistaken for a drop.
  Overhear overhears(const TxRecord& tx, NodeId observer) {
    Node& o = nodes_[observer];
    if (!o.alive() || dist(tx.sender, observer) > r_overlay_) return Overhear::kOutOfRange;
    for (const auto& [iv, st] : o.activity) {
      if (st == RadioState::kTx && iv.overlaps(tx.when)) return Overhear::kDeaf;
    }
    o.activity.push_back({tx.when, RadioState::kRx});
    return Overhear::kHeard;
  }

  void on_tx_end(std::uint32_t idx) {
    TxRecord tx = txs_[idx];
    switch (tx.type) {
      case FrameType::kData:
        if (tx.scheduled_window)
          end_uplink(tx, idx);
        else
          end_relay(tx, idx);
        break;
      case FrameType::kTrustUpdate: end_trust_update(tx, idx); break;
      default: break;
    }
  }

  /// Opens the envelope at `rx`; empty on authentication failure.
  std::optional<std::uint64_t> open_at(Node& rx, const TxRecord& tx) {
    const auto& q = *tx.packet;
    charge(rx, security::CryptoOp::kOpen, data_body_);
    auto plain = backend_->open(session(tx.sender, rx.id), q.env, q.aad);
    if (!plain || body_packet_id(*plain) != q.id) {
      ++auth_failures_;
      observe({rx.id, tx.sender, trust::Verdict::kNegative, adversary::Cause::kAuthFailure, now()});
      return std::nullopt;
    }
    return body_packet_id(*plain);
  }

  /// Collection point logic shared by uplink and relay reception. Returns
  /// true when the node accepted the packet (i.e. it will be acknowledged).
  bool accept_packet(Node& rx, QueuedPacket q, Target target) {
    const SimTime t = now();
    if (adversary::apply_behavior(rx.profile, t, rx.adversary_rng) == adversary::RelayAction::kDrop) {
      drop(q.id, DropReason::kMaliciousDrop);
      return false;
    }
    ledger_.hop(q.id);
    const SimTime opened = t + delay(security::CryptoOp::kOpen, data_body_);
    if (target == Target::kHead || rx.id == leader_) {
      deliver(q.id, opened);
      return true;
    }
    if (!rx.is_head()) {
      drop(q.id, DropReason::kNoRoute);
      return true;
    }
    if (rx.relay.size() >= s_.traffic.queue_limit) {
      drop(q.id, DropReason::kQueueOverflow);
      return true;
    }
    q.target = Target::kLeader;
    q.attempts = 0;
    q.sealed_for = kNone;
    q.ready_at = opened + delay(security::CryptoOp::kSeal, data_body_);
    charge(rx, security::CryptoOp::kSeal, data_body_);
    rx.relay.push_back(std::move(q));
    return true;
  }

  void end_uplink(const TxRecord& tx, std::uint32_t idx) {
    Node& m = nodes_[tx.sender];
    QueuedPacket q = *tx.packet;
    const bool ok = received(tx, idx, tx.receiver);
    m.link_quality[tx.receiver].record(ok);
    if (ok) {
      Node& h = nodes_[tx.receiver];
      if (open_at(h, tx)) {
        ++m.delivered_this_sf;
        if (accept_packet(h, std::move(q), txs_[idx].packet->target)) clusters_[h.id].acked.insert(m.id);
      } else {
        drop(q.id, DropReason::kAuthFailure);
      }
    } else if (m.alive()) {
      ++q.attempts;
      if (q.attempts > s_.mac.retry_limit)
        drop(q.id, DropReason::kRetryExhausted);
      else
        m.uplink.push_front(std::move(q));
    } else {
      drop(q.id, DropReason::kNodeDead);
    }
    if (!m.alive() || m.head == kNone || m.is_head()) return;
    auto it = clusters_.find(m.head);
    if (it == clusters_.end()) return;
    if (const auto slot = it->second.sf.slot_of(m.id)) send_next_in_slot(m, *slot);
  }

  void end_relay(const TxRecord& tx, std::uint32_t idx) {
    Node& h = nodes_[tx.sender];
    const std::uint64_t pid = tx.packet->id;
    for (auto w = watches_.begin(); w != watches_.end();) {
      if (w->subject != tx.sender || w->packet != pid) {
        ++w;
        continue;
      }
      const auto heard = overhears(tx, w->observer);
      if (heard == Overhear::kHeard)
        observe({w->observer, w->subject, trust::Verdict::kPositive, adversary::Cause::kForwarded, now()});
      if (heard == Overhear::kDeaf) ++deaf_watches_;
      // Deaf: the observer was transmitting itself, so the watch is inconclusive.
      w = heard == Overhear::kOutOfRange ? std::next(w) : watches_.erase(w);
    }
    const bool ok = received(tx, idx, tx.receiver);
    h.link_quality[tx.receiver].record(ok);
    if (h.relay.empty() || h.relay.front().id != pid) return;
    if (ok) {
      mac::on_tx_success(h.backoff, h.mac_rng, s_.mac);
      QueuedPacket q = std::move(h.relay.front());
      h.relay.pop_front();
      Node& nx = nodes_[tx.receiver];
      if (!open_at(nx, tx)) {
        drop(q.id, DropReason::kAuthFailure);
        return;
      }
      if (nx.id != leader_)
        watches_.push_back({h.id, nx.id, q.id,
                            now() + SimTime::from_us(frame_len_.us() * s_.traffic.watchdog_timeout_superframes)});
      accept_packet(nx, std::move(q), Target::kLeader);
    } else if (mac::on_tx_failure(h.backoff, h.mac_rng, s_.mac)) {
      drop(pid, DropReason::kRetryExhausted);
      h.relay.pop_front();
      h.relay_next_hop = kNone;
    }
  }

  void end_trust_update(const TxRecord& tx, std::uint32_t idx) {
    Node& nd = nodes_[tx.sender];
    nd.pending_trust_events -= std::min(nd.pending_trust_events, tx.trust_events);
    mac::on_tx_success(nd.backoff, nd.mac_rng, s_.mac);
    ++trust_update_frames_;
    if (tx.channel != tx.sender && received(tx, idx, tx.channel)) charge(nodes_[tx.channel], security::CryptoOp::kVerify);
  }

  void expire_watches(SimTime t) {
    for (auto w = watches_.begin(); w != watches_.end();) {
      if (w->deadline > t) {
        ++w;
        continue;
      }
      const Node& sub = nodes_[w->subject];
      const bool link_up = sub.alive() && nodes_[w->observer].alive() &&
                           dist(w->observer, w->subject) <= r_overlay_;
      trace({{"ev", "watch-expired"}, {"packet", w->packet}, {"observer", w->observer}, {"subject", w->subject}, {"link_up", link_up}});
      if (auto o = adversary::observe_forwarding(w->observer, w->subject, false, true, link_up, t)) observe(*o);
      w = watches_.erase(w);
    }
  }

  // ------------------------------------------------------------ broadcast

  void on_broadcast() {
    const SimTime t = now();
    for (auto& [head, cl] : clusters_) {
      Node& h = nodes_[head];
      if (!h.alive()) continue;
      // Beacon body: superframe index, member count, schedule digest, ack bitmap.
      Bytes body(frame::kBeaconBody, 0);
      for (int i = 0; i < 4; ++i) body[i] = static_cast<std::uint8_t>(sf_index_ >> (8 * i));
      body[4] = static_cast<std::uint8_t>(std::min<std::size_t>(cl.members.size(), 255));
      std::uint64_t digest = 1469598103934665603ULL;
      for (NodeId m : cl.members) digest = (digest ^ m) * 1099511628211ULL;
      for (int i = 0; i < 8; ++i) body[5 + i] = static_cast<std::uint8_t>(digest >> (8 * i));
      for (std::size_t k = 0; k < cl.members.size() && 13 + k / 8 < body.size(); ++k) {
        if (cl.acked.count(cl.members[k])) body[13 + k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
      }
      const auto size = frame::wire_size(FrameType::kBeacon, body.size());
      Bytes msg = header_bytes(FrameType::kBeacon, head, kBroadcast, h.frame_seq++, size.trailer());
      msg.insert(msg.end(), body.begin(), body.end());
      const auto sig = backend_->sign(head, msg);
      charge(h, security::CryptoOp::kSign);

      TxRecord tx;
      tx.sender = head;
      tx.receiver = kBroadcast;
      tx.channel = head;
      tx.type = FrameType::kBeacon;
      tx.size = size;
      tx.when = {t, t + airtime(size.total())};
      const auto idx = static_cast<std::uint32_t>(txs_.size());
      by_channel_[head].push_back(idx);
      h.activity.push_back({tx.when, RadioState::kTx});
      account(size);
      txs_.push_back(tx);

      for (std::size_t k = 0; k < cl.members.size(); ++k) {
        Node& m = nodes_[cl.members[k]];
        if (!m.alive() || m.head != head) continue;
        bool ok = received(tx, idx, m.id);
        if (ok) {
          charge(m, security::CryptoOp::kVerify);
          if (!backend_->verify(head, msg, sig)) {
            ++auth_failures_;
            observe({m.id, head, trust::Verdict::kNegative, adversary::Cause::kAuthFailure, t});
            ok = false;
          }
        }
        if (ok) {
          m.missed_beacons = 0;
          if (m.delivered_this_sf > 0) {
            const bool acked = (body[13 + k / 8] >> (k % 8)) & 1u;
            observe({m.id, head, acked ? trust::Verdict::kPositive : trust::Verdict::kNegative,
                     acked ? adversary::Cause::kForwarded : adversary::Cause::kDropped, t});
          }
        } else if (++m.missed_beacons >= s_.clustering.beacon_loss_limit) {
          m.missed_beacons = 0;
          m.head = kNone;
          cl.schedule_dirty = true;
          ++evictions_;
        }
        m.delivered_this_sf = 0;
      }
      cl.members.erase(std::remove_if(cl.members.begin(), cl.members.end(),
                                      [&](NodeId m) { return nodes_[m].head != head; }),
                       cl.members.end());
      cl.acked.clear();

      if (cl.schedule_dirty) {
        const auto ssize = frame::wire_size(FrameType::kSchedule, frame::schedule_body(cl.members.size()));
        const SimTime s0 = tx.when.end;
        TxRecord stx;
        stx.sender = head;
        stx.receiver = kBroadcast;
        stx.channel = head;
        stx.type = FrameType::kSchedule;
        stx.size = ssize;
        stx.when = {s0, s0 + airtime(ssize.total())};
        h.activity.push_back({stx.when, RadioState::kTx});
        charge(h, security::CryptoOp::kSign);
        account(ssize);
        for (NodeId m : cl.members) {
          nodes_[m].activity.push_back({stx.when, RadioState::kRx});
          charge(nodes_[m], security::CryptoOp::kVerify);
        }
        cl.schedule_dirty = false;
      }
    }
    for (auto& nd : nodes_) nd.delivered_this_sf = 0;
  }

  // ------------------------------------------------------------------ trust

  void observe(const adversary::Observation& o) {
    if (!trust_on() || o.observer == o.subject) return;
    Node& obs = nodes_[o.observer];
    if (!obs.alive()) return;
    obs.trust.observe(o.subject, o.verdict, o.at, s_.trust.params);
    charge(obs, security::CryptoOp::kTrustUpdate);
    if (o.verdict == trust::Verdict::kPositive) {
      ++positive_obs_;
    } else {
      ++negative_obs_;
      ++obs.pending_trust_events;
    }
    if (obs.head == o.subject && !obs.is_head() && obs.trust.distrusts(o.subject, s_.trust.params))
      election_pending_ = true;
    trace({{"ev", "observation"},
           {"observer", o.observer},
           {"subject", o.subject},
           {"verdict", o.verdict == trust::Verdict::kPositive ? "positive" : "negative"},
           {"cause", adversary::to_string(o.cause)}});
  }

  // ---------------------------------------------------------------- metrics

  void sample(SimTime t) {
    refresh_flags();
    TimeseriesRow row;
    row.t_s = t.seconds();
    double residual = 0.0;
    for (const auto& nd : nodes_) {
      if (nd.alive()) ++row.alive;
      residual += nd.energy.residual;
      if (flagged(nd.id)) (nd.malicious() ? row.flagged_malicious : row.flagged_benign)++;
    }
    row.heads = clusters_.size();
    row.sent = ledger_.sent();
    row.delivered = ledger_.delivered();
    row.dropped = ledger_.dropped();
    row.mean_residual_j = residual / static_cast<double>(n_);
    row.overhead_fraction = metrics::overhead_fraction(overhead_.overhead(), overhead_.total());
    rows_.push_back(row);
    heads_sum_ += static_cast<double>(clusters_.size());
    std::size_t members = 0;
    for (const auto& [h, cl] : clusters_) members += cl.members.size();
    members_sum_ += clusters_.empty() ? 0.0 : static_cast<double>(members) / static_cast<double>(clusters_.size());
    ++samples_;
  }

  std::vector<bool> current_flags() const {
    std::vector<bool> f(n_, false);
    for (std::size_t i = 0; i < n_; ++i) f[i] = flagged(static_cast<NodeId>(i));
    return f;
  }

  void take_detection_snapshot() {
    refresh_flags();
    detection_snapshot_ = metrics::detection_rate(malicious_, current_flags());
  }

  RunOutput finish(RunOutcome outcome) {
    const SimTime end = now();
    close_superframe(sf_start_, std::max(end, sf_start_));
    if (!detection_snapshot_) take_detection_snapshot();
    refresh_flags();

    std::uint64_t queued = 0;
    for (const auto& nd : nodes_) queued += nd.uplink.size() + nd.relay.size();
    // Uplink frames still on the air at the horizon have left their queue.
    for (const auto& tx : txs_) {
      if (tx.scheduled_window && tx.packet && tx.when.end > end) ++queued;
    }
    ledger_.audit();
    if (queued != ledger_.in_flight()) throw HardFault("packet conservation violated: queue census mismatch");

    RunOutput out;
    RunReport& r = out.report;
    r.seed = seed_;
    r.scenario = s_.name;
    r.config = to_json(s_);
    r.config_digest = config_digest(s_);
    r.trust_enabled = trust_on();
    r.crypto_backend = security::to_string(s_.security.backend);
    r.simulated_s = end.seconds();
    r.outcome = outcome == RunOutcome::kStopRule ? "stop-rule" : "horizon";
    r.sent = ledger_.sent();
    r.delivered = ledger_.delivered();
    r.dropped = ledger_.dropped();
    r.in_flight = ledger_.in_flight();
    for (std::size_t k = 0; k < metrics::kDropReasonCount; ++k) {
      const auto why = static_cast<DropReason>(k);
      r.drops_by_reason[metrics::to_string(why)] = ledger_.dropped(why);
    }
    r.conservation_ok = true;
    r.pdr = metrics::pdr(ledger_);
    r.delay = metrics::delay_stats(ledger_);
    r.detection = *detection_snapshot_;
    r.detection_horizon_s = s_.detection_horizon();
    r.detection_at_end = metrics::detection_rate(malicious_, current_flags());
    r.overhead = overhead_;
    r.tally = tally_;
    r.overhead_fraction = metrics::overhead_fraction(overhead_.overhead(), overhead_.total());
    r.overhead_cross_check = tally_.overhead == overhead_.overhead() && tally_.total == overhead_.total();

    std::vector<double> deaths;
    double sum = 0.0;
    r.energy.min_residual_j = std::numeric_limits<double>::infinity();
    for (const auto& nd : nodes_) {
      const auto& l = nd.energy;
      if (l.died_at) deaths.push_back(l.died_at->seconds());
      sum += l.residual;
      r.energy.min_residual_j = std::min(r.energy.min_residual_j, l.residual);
      r.energy.max_residual_j = std::max(r.energy.max_residual_j, l.residual);
      r.energy.total_consumed_j += l.total_consumed();
      for (int k = 0; k < 4; ++k) r.energy.consumed_by_state_j[k] += l.consumed[k];
      r.energy.max_drift_j = std::max(r.energy.max_drift_j, std::abs(l.initial - l.residual - l.total_consumed()));
      if (l.alive) ++r.energy.alive_at_end;
    }
    r.energy.mean_residual_j = sum / static_cast<double>(n_);
    r.lifetime = metrics::lifetime(deaths, n_);

    r.mac.superframes = sf_index_;
    r.mac.tiling_failures = tiling_failures_;
    r.mac.scheduled_transmissions = scheduled_tx_;
    r.mac.compliant_collisions = auditor_.compliant_collisions();
    r.mac.contention_transmissions = contention_tx_;
    r.mac.contention_collisions = contention_collisions_;
    r.mac.violations_suppressed = violations_;
    r.mac.fading_losses = fading_losses_;
    r.trust.positive_observations = positive_obs_;
    r.trust.negative_observations = negative_obs_;
    r.trust.trust_update_frames = trust_update_frames_;
    r.trust.auth_failures = auth_failures_;
    r.clusters.elections = elections_;
    r.clusters.mean_heads = samples_ ? heads_sum_ / static_cast<double>(samples_) : 0.0;
    r.clusters.mean_cluster_size = samples_ ? members_sum_ / static_cast<double>(samples_) : 0.0;
    r.clusters.evictions = evictions_;

    out.timeseries = std::move(rows_);
    if (opts_.keep_ledger) out.ledger = ledger_;
    SPDLOG_INFO("seed {}: pdr={} events={}", seed_, r.pdr ? *r.pdr : -1.0, events_);
    return out;
  }

  const Scenario& s_;
  std::uint64_t seed_;
  RunOptions opts_;
  std::size_t n_;
  SimTime frame_len_;
  SimTime horizon_;
  RngStream fading_rng_;
  std::unique_ptr<security::CryptoBackend> backend_;
  adversary::DetectionTracker detection_;

  double r_neighbor_ = 0.0;
  double r_overlay_ = 0.0;
  double r_sense_ = 0.0;
  std::size_t data_body_ = 0;
  frame::WireSize data_size_;
  SimTime data_air_;

  std::vector<Node> nodes_;
  std::vector<bool> malicious_;
  std::map<NodeId, ClusterState> clusters_;
  NodeId leader_ = kNone;
  std::map<std::pair<NodeId, NodeId>, security::SessionKey> sessions_;

  EventQueue<Ev> queue_;
  bool stop_ = false;
  std::uint64_t events_ = 0;
  SimTime sf_start_;
  std::uint64_t sf_index_ = 0;
  std::vector<TxRecord> txs_;
  std::vector<std::vector<std::uint32_t>> by_channel_;
  std::vector<NodeId> contenders_;
  std::vector<Watch> watches_;

  bool election_pending_ = false;
  std::optional<SimTime> last_election_;
  SimTime next_periodic_election_;
  SimTime next_sample_;
  std::optional<metrics::DetectionSummary> detection_snapshot_;

  metrics::PacketLedger ledger_;
  metrics::OverheadCounters overhead_;
  metrics::FrameTally tally_;
  mac::CollisionAuditor auditor_;
  channel::ChannelCounters chan_counters_;
  std::vector<TimeseriesRow> rows_;

  std::uint64_t superframes_built_ = 0;
  std::uint64_t tiling_failures_ = 0;
  std::uint64_t scheduled_tx_ = 0;
  std::uint64_t contention_tx_ = 0;
  std::uint64_t sched_collisions_ = 0;
  std::uint64_t contention_collisions_ = 0;
  std::uint64_t violations_ = 0;
  std::uint64_t fading_losses_ = 0;
  std::uint64_t positive_obs_ = 0;
  std::uint64_t negative_obs_ = 0;
  std::uint64_t trust_update_frames_ = 0;
  std::uint64_t auth_failures_ = 0;
  std::uint64_t elections_ = 0;
  std::uint64_t evictions_ = 0;
  std::uint64_t deaf_watches_ = 0;
  double heads_sum_ = 0.0;
  double members_sum_ = 0.0;
  std::uint64_t samples_ = 0;
};

}  // namespace

RunOutput run_simulation(const Scenario& s, std::uint64_t seed, const RunOptions& opts) {
  World w(s, seed, opts);
  return w.run();
}

}  // namespace swarmnet
