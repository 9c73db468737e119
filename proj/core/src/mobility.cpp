#include "swarmnet/mobility.hpp"

#include <algorithm>
#include <stdexcept>

namespace swarmnet::mobility {

double MobilityState::travel_seconds() const {
  const double d = distance(origin, leg.target);
  return d == 0.0 ? 0.0 : d / leg.speed;
}

SimTime MobilityState::leg_end() const {
  return leg_start + SimTime::from_seconds(travel_seconds() + leg.pause);
}

Phase MobilityState::phase_at(SimTime t) const {
  const double elapsed = (t - leg_start).seconds();
  return elapsed < travel_seconds() ? Phase::kMoving : Phase::kPaused;
}

Vec3 uniform_position(RngStream& rng, const Box& box) {
  return {rng.uniform(0.0, box.extent.x), rng.uniform(0.0, box.extent.y),
          rng.uniform(0.0, box.extent.z)};
}

Waypoint next_waypoint(RngStream& rng, const Box& box, Range speed, Range pause) {
  if (box.extent.x < 0.0 || box.extent.y < 0.0 || box.extent.z < 0.0)
    throw std::invalid_argument("box extents must be non-negative");
  if (speed.lo <= 0.0) throw std::invalid_argument("minimum speed must be positive");
  if (speed.hi < speed.lo || pause.hi < pause.lo || pause.lo < 0.0)
    throw std::invalid_argument("speed/pause ranges must be ordered and non-negative");

  Waypoint w;
  w.target = uniform_position(rng, box);
  w.speed = rng.uniform(speed.lo, speed.hi);
  w.pause = rng.uniform(pause.lo, pause.hi);
  return w;
}

Vec3 position_at(const MobilityState& state, SimTime t) {
  const double elapsed = (t - state.leg_start).seconds();
  const double travel = state.travel_seconds();
  if (travel == 0.0 || elapsed >= travel) return state.leg.target;
  const double frac = std::clamp(elapsed / travel, 0.0, 1.0);
  return state.origin + (state.leg.target - state.origin) * frac;
}

MobilityState start_leg(RngStream& rng, const Box& box, Range speed, Range pause, Vec3 from,
                        SimTime t) {
  return MobilityState{from, next_waypoint(rng, box, speed, pause), t};
}

}  // namespace swarmnet::mobility
