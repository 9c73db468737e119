#include "swarmnet/scenario.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace swarmnet {

using nlohmann::json;

std::string ConfigError::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < errors.size(); ++i) os << (i ? "\n" : "") << errors[i];
  return os.str();
}

std::string to_string(StopRule r) { return r == StopRule::kHalfDead ? "half-dead" : "fixed-horizon"; }

namespace {

// Reads one JSON object, remembering which keys were consumed so that the
// rest can be reported as unknown.
class Reader {
 public:
  Reader(const json* obj, std::string path, std::vector<std::string>* errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (obj_ != nullptr && !obj_->is_object()) {
      error("", "expected an object");
      obj_ = nullptr;
    }
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    if (obj_ == nullptr) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (v->is_number())
        out = v->get<double>();
      else
        error(key, "expected a number");
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = get(key)) {
      if (v->is_null())
        out.reset();
      else if (v->is_number())
        out = v->get<double>();
      else
        error(key, "expected a number or null");
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = get(key)) {
      if (v->is_number_integer() && !(v->is_number_unsigned() && v->get<std::uint64_t>() >
                                          static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) &&
          v->get<std::int64_t>() >= static_cast<std::int64_t>(std::numeric_limits<Int>::min()))
        out = v->get<Int>();
      else
        error(key, "expected an integer in range");
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (v->is_boolean())
        out = v->get<bool>();
      else
        error(key, "expected true or false");
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (v->is_string())
        out = v->get<std::string>();
      else
        error(key, "expected a string");
    }
  }

  void millis(const std::string& key, SimTime& out) {
    double ms = out.ms();
    const bool had = obj_ != nullptr && obj_->contains(key);
    number(key, ms);
    if (!had) return;
    if (!(ms >= 0.0) || !std::isfinite(ms))
      error(key, "expected a non-negative duration");
    else
      out = SimTime::from_ms(ms);
  }

  Reader child(const std::string& key) { return Reader(get(key), path_ + "/" + key, errors_); }

  void finish() {
    if (obj_ == nullptr) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it) {
      if (!seen_.count(it.key())) error(it.key(), "unknown key");
    }
  }

  void error(const std::string& key, const std::string& msg) {
    errors_->push_back((key.empty() ? (path_.empty() ? "/" : path_) : path_ + "/" + key) + ": " + msg);
  }

  const std::string& path() const { return path_; }
  void absorb(const std::vector<std::string>& errs) {
    errors_->insert(errors_->end(), errs.begin(), errs.end());
  }

 private:
  const json* obj_;
  std::string path_;
  std::vector<std::string>* errors_;
  std::set<std::string> seen_;
};

void read_seeds(Reader& r, Scenario& s) {
  const json* one = r.get("seed");
  const json* many = r.get("seeds");
  if (one != nullptr && many != nullptr) {
    r.error("seeds", "give either seed or seeds, not both");
    return;
  }
  if (one != nullptr) {
    if (one->is_number_unsigned())
      s.seeds = {one->get<std::uint64_t>()};
    else
      r.error("seed", "expected a non-negative integer");
  }
  if (many != nullptr) {
    if (!many->is_array() || many->empty()) {
      r.error("seeds", "expected a non-empty array of non-negative integers");
      return;
    }
    s.seeds.clear();
    for (const auto& v : *many) {
      if (!v.is_number_unsigned()) {
        r.error("seeds", "expected a non-empty array of non-negative integers");
        return;
      }
      s.seeds.push_back(v.get<std::uint64_t>());
    }
  }
}

void read_area(Reader& r, Scenario& s) {
  const json* v = r.get("area_m");
  if (v == nullptr) return;
  if (!v->is_array() || v->size() != 3 || !(*v)[0].is_number() || !(*v)[1].is_number() ||
      !(*v)[2].is_number()) {
    r.error("area_m", "expected [x, y, z] in metres");
    return;
  }
  s.area.extent = Vec3{(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
}

void read_channel(Reader r, channel::ChannelParams& c) {
  r.number("ref_loss_db", c.ref_loss_db);
  r.number("ref_distance_m", c.ref_distance_m);
  r.number("path_exponent", c.path_exponent);
  r.number("tx_power_dbm", c.tx_power_dbm);
  r.number("sensitivity_dbm", c.sensitivity_dbm);
  r.number("bitrate_bps", c.bitrate_bps);
  if (const json* bands = r.get("nakagami")) {
    if (!bands->is_array() || bands->empty()) {
      r.error("nakagami", "expected a non-empty array of {below_m, m}");
    } else {
      c.nakagami.clear();
      for (std::size_t i = 0; i < bands->size(); ++i) {
        channel::NakagamiBand band{std::numeric_limits<double>::infinity(), 1.0};
        std::optional<double> below;
        std::vector<std::string> local;
        Reader br(&(*bands)[i], r.path() + "/nakagami/" + std::to_string(i), &local);
        br.optional_number("below_m", below);
        br.number("m", band.shape);
        br.finish();
        r.absorb(local);
        if (below) band.below_m = *below;
        c.nakagami.push_back(band);
      }
    }
  }
  r.finish();
}

void read_energy(Reader r, energy::EnergyParams& e) {
  r.number("tx_current_a", e.tx_current_a);
  r.number("rx_current_a", e.rx_current_a);
  r.number("idle_current_a", e.idle_current_a);
  r.number("sleep_current_a", e.sleep_current_a);
  r.number("supply_voltage_v", e.supply_voltage_v);
  r.number("initial_energy_j", e.initial_energy_j);
  r.finish();
}

void read_trust(Reader r, TrustConfig& t) {
  r.boolean("enabled", t.enabled);
  r.number("delta_alpha", t.params.delta_alpha);
  r.number("delta_beta", t.params.delta_beta);
  r.number("lambda", t.params.lambda);
  r.number("isolation_threshold", t.params.isolation_threshold);
  r.number("prior_alpha", t.params.prior_alpha);
  r.number("prior_beta", t.params.prior_beta);
  r.number("quorum", t.quorum);
  std::string order = t.params.order == trust::DecayOrder::kIncrementThenDecay
                          ? "increment-then-decay"
                          : "decay-then-increment";
  r.text("decay_order", order);
  if (order == "increment-then-decay")
    t.params.order = trust::DecayOrder::kIncrementThenDecay;
  else if (order == "decay-then-increment")
    t.params.order = trust::DecayOrder::kDecayThenIncrement;
  else
    r.error("decay_order", "expected increment-then-decay or decay-then-increment");
  r.finish();
}

void read_clustering(Reader r, ClusteringConfig& c) {
  {
    Reader w = r.child("weights");
    w.number("trust", c.weights.trust);
    w.number("energy", c.weights.energy);
    w.number("connectivity", c.weights.connectivity);
    w.finish();
  }
  {
    Reader u = r.child("route_weights");
    u.number("trust", c.route.trust);
    u.number("link_quality", c.route.link_quality);
    u.number("distance", c.route.distance);
    u.finish();
  }
  r.number("neighbor_margin_db", c.neighbor_margin_db);
  r.number("overlay_margin_db", c.overlay_margin_db);
  r.number("election_interval_s", c.election_interval_s);
  r.number("min_election_gap_s", c.min_election_gap_s);
  r.integer("beacon_loss_limit", c.beacon_loss_limit);
  r.number("abdication_fraction", c.abdication_fraction);
  r.integer("max_members", c.max_members);
  r.finish();
}

void read_mac(Reader r, mac::MacConfig& m) {
  r.millis("contention_ms", m.contention_len);
  r.millis("scheduled_ms", m.scheduled_len);
  r.millis("broadcast_ms", m.broadcast_len);
  r.millis("guard_ms", m.guard);
  r.millis("backoff_slot_ms", m.backoff_slot);
  r.integer("cw_min", m.cw_min);
  r.integer("cw_max", m.cw_max);
  r.integer("retry_limit", m.retry_limit);
  r.boolean("slots_by_backlog", m.slots_by_backlog);
  r.finish();
}

void read_security(Reader r, SecurityConfig& s) {
  std::string backend = security::to_string(s.backend);
  r.text("backend", backend);
  if (auto b = security::parse_backend(backend))
    s.backend = *b;
  else
    r.error("backend", "expected real or modeled");
  r.millis("aead_ms_per_256_bytes", s.timing.aead_per_256);
  r.millis("verify_ms", s.timing.verify);
  r.millis("sign_ms", s.timing.sign);
  r.millis("trust_update_ms", s.timing.trust_update);
  r.finish();
}

void read_traffic(Reader r, TrafficConfig& t) {
  r.integer("packet_bytes", t.packet_bytes);
  r.integer("packets_per_superframe", t.packets_per_superframe);
  r.number("inter_cluster_fraction", t.inter_cluster_fraction);
  r.integer("queue_limit", t.queue_limit);
  r.integer("watchdog_timeout_superframes", t.watchdog_timeout_superframes);
  r.finish();
}

void read_adversaries(Reader& r, Scenario& s) {
  const json* list = r.get("adversaries");
  if (list == nullptr) return;
  if (!list->is_array()) {
    r.error("adversaries", "expected an array of adversary groups");
    return;
  }
  std::vector<std::string> local;
  for (std::size_t i = 0; i < list->size(); ++i) {
    Reader g(&(*list)[i], r.path() + "/adversaries/" + std::to_string(i), &local);
    AdversaryGroup group;
    std::string kind = "blackhole";
    g.text("kind", kind);
    if (auto k = adversary::parse_kind(kind))
      group.profile.kind = *k;
    else
      g.error("kind", "expected blackhole, grayhole or mac-violator");
    group.profile.drop_prob = group.profile.kind == adversary::Kind::kBlackhole ? 1.0 : 0.0;
    g.number("drop_prob", group.profile.drop_prob);
    g.number("violation_rate", group.profile.violation_rate);
    double active_from = 0.0;
    g.number("active_from_s", active_from);
    if (active_from < 0.0)
      g.error("active_from_s", "expected >= 0");
    else
      group.profile.active_from = SimTime::from_seconds(active_from);
    g.boolean("inflate_candidacy", group.profile.inflate_candidacy);
    g.number("fraction", group.fraction);
    if (const json* nodes = g.get("nodes")) {
      if (!nodes->is_array()) {
        g.error("nodes", "expected an array of node ids");
      } else {
        for (const auto& n : *nodes) {
          if (!n.is_number_unsigned() || n.get<std::uint64_t>() >= 0xFFFF) {
            g.error("nodes", "expected node ids");
            break;
          }
          group.nodes.push_back(static_cast<NodeId>(n.get<std::uint64_t>()));
        }
      }
    }
    g.finish();
    s.adversaries.push_back(group);
  }
  r.absorb(local);
}

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> errors;
  auto add = [&](const std::string& path, const std::vector<std::string>& msgs) {
    for (const auto& m : msgs) errors.push_back(path + ": " + m);
  };
  if (s.node_count < 2 || s.node_count > 0xFFFE)
    errors.emplace_back("/node_count: must lie in [2, 65534]");
  if (!(s.area.extent.x > 0.0 && s.area.extent.y > 0.0 && s.area.extent.z > 0.0))
    errors.emplace_back("/area_m: every extent must be > 0");
  if (!(s.duration_s > 0.0)) errors.emplace_back("/duration_s: must be > 0");
  if (s.seeds.empty()) errors.emplace_back("/seeds: at least one seed required");

  if (!(s.mobility.speed.lo > 0.0)) errors.emplace_back("/mobility/speed_min_mps: must be > 0");
  if (!(s.mobility.speed.hi >= s.mobility.speed.lo))
    errors.emplace_back("/mobility/speed_max_mps: must be >= speed_min_mps");
  if (!(s.mobility.pause.lo >= 0.0 && s.mobility.pause.hi >= s.mobility.pause.lo))
    errors.emplace_back("/mobility: pause range must satisfy 0 <= min <= max");

  add("/channel", s.channel.validate());
  add("/energy", s.energy.validate());
  add("/trust", s.trust.params.validate());
  if (!(s.trust.quorum > 0.0 && s.trust.quorum <= 1.0))
    errors.emplace_back("/trust/quorum: must lie in (0, 1]");

  add("/clustering/weights", s.clustering.weights.validate());
  const auto& u = s.clustering.route;
  if (!(u.trust >= 0.0 && u.link_quality >= 0.0 && u.distance >= 0.0))
    errors.emplace_back("/clustering/route_weights: must be >= 0");
  if (!std::isfinite(s.clustering.neighbor_margin_db) || !std::isfinite(s.clustering.overlay_margin_db))
    errors.emplace_back("/clustering: margins must be finite");
  if (!(s.clustering.election_interval_s > 0.0))
    errors.emplace_back("/clustering/election_interval_s: must be > 0");
  if (!(s.clustering.min_election_gap_s >= 0.0))
    errors.emplace_back("/clustering/min_election_gap_s: must be >= 0");
  if (s.clustering.beacon_loss_limit < 1)
    errors.emplace_back("/clustering/beacon_loss_limit: must be >= 1");
  if (!(s.clustering.abdication_fraction >= 0.0 && s.clustering.abdication_fraction <= 1.0))
    errors.emplace_back("/clustering/abdication_fraction: must lie in [0, 1]");
  if (s.clustering.max_members < 1) errors.emplace_back("/clustering/max_members: must be >= 1");

  add("/mac", s.mac.validate());
  if (s.mac.backoff_slot > s.mac.contention_len && s.mac.contention_len.us() > 0)
    errors.emplace_back("/mac/backoff_slot_ms: longer than the contention window");

  if (s.traffic.packet_bytes <= frame::kHeaderBytes || s.traffic.packet_bytes > 2048)
    errors.emplace_back("/traffic/packet_bytes: must lie in (11, 2048]");
  if (s.traffic.packets_per_superframe < 0)
    errors.emplace_back("/traffic/packets_per_superframe: must be >= 0");
  if (!(s.traffic.inter_cluster_fraction >= 0.0 && s.traffic.inter_cluster_fraction <= 1.0))
    errors.emplace_back("/traffic/inter_cluster_fraction: must lie in [0, 1]");
  if (s.traffic.queue_limit < 1) errors.emplace_back("/traffic/queue_limit: must be >= 1");
  if (s.traffic.watchdog_timeout_superframes < 1)
    errors.emplace_back("/traffic/watchdog_timeout_superframes: must be >= 1");

  std::set<NodeId> taken;
  double fraction_sum = 0.0;
  for (std::size_t i = 0; i < s.adversaries.size(); ++i) {
    const auto& g = s.adversaries[i];
    const std::string path = "/adversaries/" + std::to_string(i);
    add(path, g.profile.validate());
    if (!(g.fraction >= 0.0 && g.fraction <= 1.0)) errors.push_back(path + "/fraction: must lie in [0, 1]");
    fraction_sum += g.nodes.empty() ? g.fraction : 0.0;
    for (NodeId n : g.nodes) {
      if (n >= s.node_count) errors.push_back(path + "/nodes: id " + std::to_string(n) + " out of range");
      if (!taken.insert(n).second)
        errors.push_back(path + "/nodes: id " + std::to_string(n) + " listed twice");
    }
  }
  if (static_cast<double>(taken.size()) + fraction_sum * static_cast<double>(s.node_count) >
      static_cast<double>(s.node_count) + 1e-9)
    errors.emplace_back("/adversaries: more adversaries than nodes");

  if (!(s.metrics.sample_interval_s > 0.0))
    errors.emplace_back("/metrics/sample_interval_s: must be > 0");
  if (s.metrics.detection_horizon_s &&
      !(*s.metrics.detection_horizon_s > 0.0 && *s.metrics.detection_horizon_s <= s.duration_s))
    errors.emplace_back("/metrics/detection_horizon_s: must lie in (0, duration_s]");
  return errors;
}

LoadResult parse_scenario(const json& doc) {
  ConfigError err;
  if (!doc.is_object()) {
    err.errors.emplace_back("/: expected a JSON object");
    return err;
  }
  Scenario s;
  Reader r(&doc, "", &err.errors);
  r.text("name", s.name);
  r.integer("node_count", s.node_count);
  read_area(r, s);
  r.number("duration_s", s.duration_s);
  read_seeds(r, s);
  {
    Reader m = r.child("mobility");
    m.number("speed_min_mps", s.mobility.speed.lo);
    m.number("speed_max_mps", s.mobility.speed.hi);
    m.number("pause_min_s", s.mobility.pause.lo);
    m.number("pause_max_s", s.mobility.pause.hi);
    m.finish();
  }
  read_channel(r.child("channel"), s.channel);
  read_energy(r.child("energy"), s.energy);
  read_trust(r.child("trust"), s.trust);
  read_clustering(r.child("clustering"), s.clustering);
  read_mac(r.child("mac"), s.mac);
  read_security(r.child("security"), s.security);
  read_traffic(r.child("traffic"), s.traffic);
  read_adversaries(r, s);
  {
    Reader m = r.child("metrics");
    m.number("sample_interval_s", s.metrics.sample_interval_s);
    m.optional_number("detection_horizon_s", s.metrics.detection_horizon_s);
    m.finish();
  }
  std::string stop = to_string(s.stop_rule);
  r.text("stop_rule", stop);
  if (stop == "fixed-horizon")
    s.stop_rule = StopRule::kFixedHorizon;
  else if (stop == "half-dead")
    s.stop_rule = StopRule::kHalfDead;
  else
    r.error("stop_rule", "expected fixed-horizon or half-dead");
  r.finish();

  if (err.errors.empty()) err.errors = validate(s);
  if (!err.errors.empty()) return err;
  return s;
}

LoadResult load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return ConfigError{{path.string() + ": cannot open scenario file"}};
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    return ConfigError{{path.string() + ": " + e.what()}};
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["node_count"] = s.node_count;
  j["area_m"] = {s.area.extent.x, s.area.extent.y, s.area.extent.z};
  j["duration_s"] = s.duration_s;
  j["seeds"] = s.seeds;
  j["mobility"] = {{"speed_min_mps", s.mobility.speed.lo},
                   {"speed_max_mps", s.mobility.speed.hi},
                   {"pause_min_s", s.mobility.pause.lo},
                   {"pause_max_s", s.mobility.pause.hi}};
  json bands = json::array();
  for (const auto& b : s.channel.nakagami) {
    bands.push_back({{"below_m", std::isfinite(b.below_m) && b.below_m < 1e300 ? json(b.below_m) : json()},
                     {"m", b.shape}});
  }
  j["channel"] = {{"ref_loss_db", s.channel.ref_loss_db},
                  {"ref_distance_m", s.channel.ref_distance_m},
                  {"path_exponent", s.channel.path_exponent},
                  {"tx_power_dbm", s.channel.tx_power_dbm},
                  {"sensitivity_dbm", s.channel.sensitivity_dbm},
                  {"bitrate_bps", s.channel.bitrate_bps},
                  {"nakagami", bands}};
  j["energy"] = {{"tx_current_a", s.energy.tx_current_a},
                 {"rx_current_a", s.energy.rx_current_a},
                 {"idle_current_a", s.energy.idle_current_a},
                 {"sleep_current_a", s.energy.sleep_current_a},
                 {"supply_voltage_v", s.energy.supply_voltage_v},
                 {"initial_energy_j", s.energy.initial_energy_j}};
  const auto& tp = s.trust.params;
  j["trust"] = {{"enabled", s.trust.enabled},
                {"delta_alpha", tp.delta_alpha},
                {"delta_beta", tp.delta_beta},
                {"lambda", tp.lambda},
                {"isolation_threshold", tp.isolation_threshold},
                {"prior_alpha", tp.prior_alpha},
                {"prior_beta", tp.prior_beta},
                {"quorum", s.trust.quorum},
                {"decay_order", tp.order == trust::DecayOrder::kIncrementThenDecay
                                    ? "increment-then-decay"
                                    : "decay-then-increment"}};
  const auto& c = s.clustering;
  j["clustering"] = {
      {"weights",
       {{"trust", c.weights.trust}, {"energy", c.weights.energy}, {"connectivity", c.weights.connectivity}}},
      {"route_weights",
       {{"trust", c.route.trust}, {"link_quality", c.route.link_quality}, {"distance", c.route.distance}}},
      {"neighbor_margin_db", c.neighbor_margin_db},
      {"overlay_margin_db", c.overlay_margin_db},
      {"election_interval_s", c.election_interval_s},
      {"min_election_gap_s", c.min_election_gap_s},
      {"beacon_loss_limit", c.beacon_loss_limit},
      {"abdication_fraction", c.abdication_fraction},
      {"max_members", c.max_members}};
  const auto& m = s.mac;
  j["mac"] = {{"contention_ms", m.contention_len.ms()},
              {"scheduled_ms", m.scheduled_len.ms()},
              {"broadcast_ms", m.broadcast_len.ms()},
              {"guard_ms", m.guard.ms()},
              {"backoff_slot_ms", m.backoff_slot.ms()},
              {"cw_min", m.cw_min},
              {"cw_max", m.cw_max},
              {"retry_limit", m.retry_limit},
              {"slots_by_backlog", m.slots_by_backlog}};
  j["security"] = {{"backend", security::to_string(s.security.backend)},
                   {"aead_ms_per_256_bytes", s.security.timing.aead_per_256.ms()},
                   {"verify_ms", s.security.timing.verify.ms()},
                   {"sign_ms", s.security.timing.sign.ms()},
                   {"trust_update_ms", s.security.timing.trust_update.ms()}};
  j["traffic"] = {{"packet_bytes", s.traffic.packet_bytes},
                  {"packets_per_superframe", s.traffic.packets_per_superframe},
                  {"inter_cluster_fraction", s.traffic.inter_cluster_fraction},
                  {"queue_limit", s.traffic.queue_limit},
                  {"watchdog_timeout_superframes", s.traffic.watchdog_timeout_superframes}};
  json adv = json::array();
  for (const auto& g : s.adversaries) {
    adv.push_back({{"kind", adversary::to_string(g.profile.kind)},
                   {"drop_prob", g.profile.drop_prob},
                   {"violation_rate", g.profile.violation_rate},
                   {"active_from_s", g.profile.active_from.seconds()},
                   {"inflate_candidacy", g.profile.inflate_candidacy},
                   {"fraction", g.fraction},
                   {"nodes", g.nodes}});
  }
  j["adversaries"] = adv;
  j["metrics"] = {{"sample_interval_s", s.metrics.sample_interval_s},
                  {"detection_horizon_s", s.metrics.detection_horizon_s
                                              ? json(*s.metrics.detection_horizon_s)
                                              : json()}};
  j["stop_rule"] = to_string(s.stop_rule);
  return j;
}

std::string config_digest(const Scenario& s) {
  const std::string text = to_json(s).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

}  // namespace swarmnet
