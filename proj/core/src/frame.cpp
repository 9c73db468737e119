#include "swarmnet/frame.hpp"

namespace swarmnet::frame {

std::string to_string(FrameType t) {
  switch (t) {
    case FrameType::kData: return "data";
    case FrameType::kBeacon: return "beacon";
    case FrameType::kSchedule: return "schedule";
    case FrameType::kTrustUpdate: return "trust-update";
  }
  return "unknown";
}

bool is_control(FrameType t) { return t != FrameType::kData; }

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> b, std::size_t at) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(b[at + i]) << (8 * i));
  return v;
}

}  // namespace

void encode_header(const Header& h, std::vector<std::uint8_t>& out) {
  out.push_back(static_cast<std::uint8_t>(h.type));
  put_le<std::uint16_t>(out, h.src);
  put_le<std::uint16_t>(out, h.dst);
  put_le<std::uint32_t>(out, h.seq);
  put_le<std::uint16_t>(out, h.trailer_len);
}

std::optional<Header> decode_header(std::span<const std::uint8_t> b) {
  if (b.size() < kHeaderBytes) return std::nullopt;
  const auto type = b[0];
  if (type < 1 || type > 4) return std::nullopt;
  Header h;
  h.type = static_cast<FrameType>(type);
  h.src = get_le<std::uint16_t>(b, 1);
  h.dst = get_le<std::uint16_t>(b, 3);
  h.seq = get_le<std::uint32_t>(b, 5);
  h.trailer_len = get_le<std::uint16_t>(b, 9);
  return h;
}

WireSize wire_size(FrameType type, std::size_t body_bytes, bool secured) {
  WireSize w;
  w.type = type;
  w.body = body_bytes;
  if (secured) {
    w.nonce = kNonceBytes;
    w.tag = kTagBytes;
    w.signature = is_control(type) ? kSignatureBytes : 0;
  }
  return w;
}

std::size_t schedule_body(std::size_t members) { return 4 + 2 * members; }

std::size_t trust_update_body(std::size_t events) { return 1 + kTrustEventBytes * events; }

std::size_t data_body(std::size_t packet_bytes) {
  return packet_bytes > kHeaderBytes ? packet_bytes - kHeaderBytes : 0;
}

}  // namespace swarmnet::frame
