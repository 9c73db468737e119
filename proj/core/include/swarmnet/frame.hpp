#pragma once

// Wire framing. Header: type(1) src(2) dst(2) seq(4) trailer_len(2), all
// little-endian, followed by the body and the security trailer
// [nonce:12][tag:16][sig:0|64].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmnet/types.hpp"

namespace swarmnet::frame {

enum class FrameType : std::uint8_t {
  kData = 1,
  kBeacon = 2,
  kSchedule = 3,
  kTrustUpdate = 4,
};

std::string to_string(FrameType t);
bool is_control(FrameType t);

inline constexpr std::size_t kHeaderBytes = 11;
inline constexpr std::size_t kNonceBytes = 12;
inline constexpr std::size_t kTagBytes = 16;
inline constexpr std::size_t kSignatureBytes = 64;

struct Header {
  FrameType type = FrameType::kData;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t seq = 0;
  std::uint16_t trailer_len = 0;

  bool operator==(const Header&) const = default;
};

void encode_header(const Header& h, std::vector<std::uint8_t>& out);
std::optional<Header> decode_header(std::span<const std::uint8_t> bytes);

/// Byte budget of one frame on the air.
struct WireSize {
  FrameType type = FrameType::kData;
  std::size_t header = kHeaderBytes;
  std::size_t body = 0;
  std::size_t nonce = 0;
  std::size_t tag = 0;
  std::size_t signature = 0;

  std::size_t trailer() const { return nonce + tag + signature; }
  std::size_t total() const { return header + body + trailer(); }
  /// Control frames are overhead in full; data frames only for their trailer.
  std::size_t overhead() const { return is_control(type) ? total() : trailer(); }
};

/// Security trailer for a frame class: data frames carry nonce+tag; beacons,
/// schedules and trust updates additionally carry a signature.
WireSize wire_size(FrameType type, std::size_t body_bytes, bool secured = true);

/// Body sizes of the control frames.
inline constexpr std::size_t kBeaconBody = 41;  // 52 bytes with header
std::size_t schedule_body(std::size_t members);
inline constexpr std::size_t kTrustEventBytes = 16;
std::size_t trust_update_body(std::size_t events);

/// Data payload carried by an application packet of `packet_bytes` (the
/// header counts toward the packet size).
std::size_t data_body(std::size_t packet_bytes);

}  // namespace swarmnet::frame
