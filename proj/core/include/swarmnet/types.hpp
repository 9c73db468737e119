#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace swarmnet {

/// Raised for violated preconditions that indicate a bug in the caller
/// (scheduling into the past, nonce reuse, trust updates out of order...).
class HardFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using NodeId = std::uint16_t;
inline constexpr NodeId kBroadcast = 0xFFFF;

/// Simulation time in integer microseconds. Never negative.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_us(std::int64_t us) { return SimTime(us); }
  static constexpr SimTime from_ms(double ms) {
    return SimTime(static_cast<std::int64_t>(std::llround(ms * 1e3)));
  }
  static constexpr SimTime from_seconds(double s) {
    return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
  }
  static constexpr SimTime max() {
    return SimTime(std::numeric_limits<std::int64_t>::max());
  }

  constexpr std::int64_t us() const { return us_; }
  constexpr double ms() const { return static_cast<double>(us_) / 1e3; }
  constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime d) const { return SimTime(us_ + d.us_); }
  constexpr SimTime& operator+=(SimTime d) {
    us_ += d.us_;
    return *this;
  }
  /// Difference of two instants; the result must itself be non-negative.
  constexpr SimTime operator-(SimTime d) const { return SimTime(us_ - d.us_); }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime(us_ * k); }

 private:
  constexpr explicit SimTime(std::int64_t us) : us_(us) {
    if (us < 0) throw HardFault("SimTime must be non-negative");
  }
  std::int64_t us_ = 0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool operator==(const Vec3&) const = default;
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace swarmnet
