#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarmnet/engine.hpp"
#include "swarmnet/types.hpp"

namespace swarmnet::channel {

struct NakagamiBand {
  double below_m;  // applies while distance < below_m
  double shape;    // Nakagami m
};

struct ChannelParams {
  double ref_loss_db = 31.5;  // at d0 = 1 m; free space at ~900 MHz
  double ref_distance_m = 1.0;
  double path_exponent = 2.8;
  std::vector<NakagamiBand> nakagami{{80.0, 1.5}, {1e300, 0.75}};
  double tx_power_dbm = 20.0;
  double sensitivity_dbm = -92.0;
  double bitrate_bps = 1e6;

  /// Empty when valid; otherwise one message per violated constraint.
  std::vector<std::string> validate() const;
};

enum class LossReason { kNone, kBelowSensitivity, kSleeping, kDead, kCollision, kHalfDuplex };

const char* to_string(LossReason r);

struct LinkSample {
  double distance_m = 0.0;
  double rx_power_dbm = 0.0;
  double fading_gain = 1.0;
  bool delivered = false;
  LossReason reason = LossReason::kNone;
};

/// The part of a node the channel needs to see.
struct Endpoint {
  Vec3 position;
  bool alive = true;
  bool asleep = false;
};

struct Reception {
  LinkSample link;
  double airtime_s = 0.0;
};

/// `clamped_distances` counts non-positive distances (a geometry bug upstream);
/// distances inside d0 are clamped silently.
struct ChannelCounters {
  std::uint64_t clamped_distances = 0;
  std::uint64_t missed_while_sleeping = 0;
};

double path_loss_db(double d, const ChannelParams& p, ChannelCounters* counters = nullptr);

/// Shape m for a link of length d: the first band whose threshold exceeds d.
double nakagami_shape(double d, const ChannelParams& p);

/// Unit-mean Gamma(m, 1/m) power gain.
double fading_gain(RngStream& rng, double d, const ChannelParams& p);

/// Pure link budget for a given fading gain.
LinkSample link_budget(double d, double gain, const ChannelParams& p,
                       ChannelCounters* counters = nullptr);

/// Mean received power (no fading).
double mean_rx_dbm(double d, const ChannelParams& p);

/// Largest distance whose mean received power still clears the sensitivity by
/// `margin_db`.
double range_for_margin(const ChannelParams& p, double margin_db);

double airtime_seconds(std::size_t frame_bytes, const ChannelParams& p);

/// Draws fading (unless `gain_override` is set) and decides delivery.
Reception try_receive(const Endpoint& tx, const Endpoint& rx, std::size_t frame_bytes,
                      RngStream& rng, const ChannelParams& p,
                      std::optional<double> gain_override = std::nullopt,
                      ChannelCounters* counters = nullptr);

}  // namespace swarmnet::channel
