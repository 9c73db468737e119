#include "swarmnet/security.hpp"

#include <cmath>

#include "crypto_internal.hpp"

namespace swarmnet::security {

std::string to_string(BackendKind k) { return k == BackendKind::kReal ? "real" : "modeled"; }

std::optional<BackendKind> parse_backend(const std::string& s) {
  if (s == "real") return BackendKind::kReal;
  if (s == "modeled") return BackendKind::kModeled;
  return std::nullopt;
}

Nonce make_nonce(NodeId sender, std::uint64_t counter) {
  Nonce n{};
  const std::uint32_t id = sender;
  for (int i = 0; i < 4; ++i) n[i] = static_cast<std::uint8_t>(id >> (8 * i));
  for (int i = 0; i < 8; ++i) n[4 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
  return n;
}

std::pair<NodeId, std::uint64_t> split_nonce(const Nonce& n) {
  std::uint32_t id = 0;
  std::uint64_t counter = 0;
  for (int i = 0; i < 4; ++i) id |= static_cast<std::uint32_t>(n[i]) << (8 * i);
  for (int i = 0; i < 8; ++i) counter |= static_cast<std::uint64_t>(n[4 + i]) << (8 * i);
  return {static_cast<NodeId>(id), counter};
}

std::unique_ptr<CryptoBackend> make_backend(BackendKind kind, std::size_t fleet_size,
                                            std::uint64_t seed) {
  if (kind == BackendKind::kReal) return make_real_backend(fleet_size);
  return make_modeled_backend(fleet_size, seed);
}

Nonce NonceGuard::next(NodeId peer) {
  auto& c = next_counter_[peer];
  return make_nonce(self_, c++);
}

void NonceGuard::claim(NodeId peer, const Nonce& n) {
  const auto [sender, counter] = split_nonce(n);
  if (sender != self_) throw HardFault("nonce claimed by a node that does not own it");
  auto& c = next_counter_[peer];
  if (counter < c) throw HardFault("nonce reuse");
  c = counter + 1;
}

std::uint64_t NonceGuard::issued(NodeId peer) const {
  auto it = next_counter_.find(peer);
  return it == next_counter_.end() ? 0 : it->second;
}

SecureEnvelope seal_fresh(CryptoBackend& b, NonceGuard& guard, const SessionKey& key, NodeId peer,
                          ByteView plain, ByteView aad) {
  return b.seal(key, guard.next(peer), plain, aad);
}

SimTime processing_delay(CryptoOp op, std::size_t payload_bytes, const CryptoTiming& t) {
  switch (op) {
    case CryptoOp::kSign: return t.sign;
    case CryptoOp::kVerify: return t.verify;
    case CryptoOp::kTrustUpdate: return t.trust_update;
    case CryptoOp::kSeal:
    case CryptoOp::kOpen: {
      const double us = static_cast<double>(t.aead_per_256.us()) *
                        static_cast<double>(payload_bytes) / 256.0;
      return SimTime::from_us(static_cast<std::int64_t>(std::llround(us)));
    }
  }
  return SimTime{};
}

namespace detail {

void NonceLedger::consume(const SessionKey& key, const Nonce& nonce) {
  const auto [sender, counter] = split_nonce(nonce);
  auto& next = next_[{key.low, key.high, sender}];
  if (counter < next) throw HardFault("nonce reuse under session key");
  next = counter + 1;
}

}  // namespace detail
}  // namespace swarmnet::security
