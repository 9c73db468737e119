#pragma once

#include "swarmnet/engine.hpp"
#include "swarmnet/types.hpp"

namespace swarmnet::mobility {

/// Axis-aligned simulation box anchored at the origin.
struct Box {
  Vec3 extent{400.0, 400.0, 1000.0};

  bool contains(const Vec3& p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.z >= 0.0 && p.x <= extent.x && p.y <= extent.y &&
           p.z <= extent.z;
  }
  double diagonal() const { return extent.norm(); }
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct Waypoint {
  Vec3 target;
  double speed = 0.0;  // m/s
  double pause = 0.0;  // s
};

enum class Phase { kMoving, kPaused };

/// One Random Waypoint leg: travel from `origin` to `leg.target`, then pause.
struct MobilityState {
  Vec3 origin;
  Waypoint leg;
  SimTime leg_start;

  double travel_seconds() const;
  /// Instant the pause ends and the next leg must be drawn.
  SimTime leg_end() const;
  Phase phase_at(SimTime t) const;
};

/// Draws the next leg. Throws std::invalid_argument on v_min <= 0 or
/// unordered ranges.
Waypoint next_waypoint(RngStream& rng, const Box& box, Range speed, Range pause);

/// Linear interpolation along the leg, clamped at the target while paused.
Vec3 position_at(const MobilityState& state, SimTime t);

/// Convenience: starts a fresh leg at `t` from `from`.
MobilityState start_leg(RngStream& rng, const Box& box, Range speed, Range pause, Vec3 from,
                        SimTime t);

Vec3 uniform_position(RngStream& rng, const Box& box);

}  // namespace swarmnet::mobility
