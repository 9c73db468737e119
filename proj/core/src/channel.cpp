#include "swarmnet/channel.hpp"

#include <cmath>
#include <string>

namespace swarmnet::channel {

std::vector<std::string> ChannelParams::validate() const {
  std::vector<std::string> errors;
  if (ref_distance_m <= 0.0) errors.emplace_back("channel.ref_distance_m must be positive");
  if (path_exponent < 2.0 || path_exponent > 6.0)
    errors.emplace_back("channel.path_exponent outside plausible range [2, 6]");
  if (nakagami.empty()) errors.emplace_back("channel.nakagami needs at least one band");
  for (const auto& band : nakagami) {
    if (!(band.shape > 0.0)) errors.emplace_back("channel.nakagami shapes must be > 0");
  }
  if (!(bitrate_bps > 0.0)) errors.emplace_back("channel.bitrate_bps must be > 0");
  return errors;
}

const char* to_string(LossReason r) {
  switch (r) {
    case LossReason::kNone: return "none";
    case LossReason::kBelowSensitivity: return "below-sensitivity";
    case LossReason::kSleeping: return "sleeping";
    case LossReason::kDead: return "dead";
    case LossReason::kCollision: return "collision";
    case LossReason::kHalfDuplex: return "half-duplex";
  }
  return "unknown";
}

double path_loss_db(double d, const ChannelParams& p, ChannelCounters* counters) {
  if (d <= p.ref_distance_m) {
    if (d <= 0.0 && counters) ++counters->clamped_distances;
    d = p.ref_distance_m;
  }
  return p.ref_loss_db + 10.0 * p.path_exponent * std::log10(d / p.ref_distance_m);
}

double nakagami_shape(double d, const ChannelParams& p) {
  for (const auto& band : p.nakagami) {
    if (d < band.below_m) return band.shape;
  }
  return p.nakagami.back().shape;
}

double fading_gain(RngStream& rng, double d, const ChannelParams& p) {
  const double m = nakagami_shape(d, p);
  return rng.gamma(m, 1.0 / m);
}

double mean_rx_dbm(double d, const ChannelParams& p) {
  return p.tx_power_dbm - path_loss_db(d, p);
}

LinkSample link_budget(double d, double gain, const ChannelParams& p, ChannelCounters* counters) {
  LinkSample s;
  s.distance_m = d;
  s.fading_gain = gain;
  s.rx_power_dbm = p.tx_power_dbm - path_loss_db(d, p, counters) + 10.0 * std::log10(gain);
  s.delivered = s.rx_power_dbm >= p.sensitivity_dbm;
  s.reason = s.delivered ? LossReason::kNone : LossReason::kBelowSensitivity;
  return s;
}

double range_for_margin(const ChannelParams& p, double margin_db) {
  const double budget = p.tx_power_dbm - p.sensitivity_dbm - margin_db - p.ref_loss_db;
  return p.ref_distance_m * std::pow(10.0, budget / (10.0 * p.path_exponent));
}

double airtime_seconds(std::size_t frame_bytes, const ChannelParams& p) {
  return 8.0 * static_cast<double>(frame_bytes) / p.bitrate_bps;
}

Reception try_receive(const Endpoint& tx, const Endpoint& rx, std::size_t frame_bytes,
                      RngStream& rng, const ChannelParams& p, std::optional<double> gain_override,
                      ChannelCounters* counters) {
  Reception r;
  r.airtime_s = airtime_seconds(frame_bytes, p);
  const double d = distance(tx.position, rx.position);
  r.link.distance_m = d;
  if (!tx.alive || !rx.alive) {
    r.link.reason = LossReason::kDead;
    return r;
  }
  if (rx.asleep) {
    if (counters) ++counters->missed_while_sleeping;
    r.link.reason = LossReason::kSleeping;
    return r;
  }
  const double gain = gain_override ? *gain_override : fading_gain(rng, d, p);
  r.link = link_budget(d, gain, p, counters);
  return r;
}

}  // namespace swarmnet::channel
