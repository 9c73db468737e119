#pragma once

// Signatures, pairwise session keys and AEAD envelopes behind one interface.
// The "real" backend uses ECDSA P-256, ECDH + HKDF-SHA256 and AES-256-GCM;
// the "modeled" backend substitutes keyed SHA-256 constructions with the
// same sizes and accept/reject semantics.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swarmnet/frame.hpp"
#include "swarmnet/types.hpp"

namespace swarmnet::security {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Signature = std::array<std::uint8_t, frame::kSignatureBytes>;
using Nonce = std::array<std::uint8_t, frame::kNonceBytes>;
using Tag = std::array<std::uint8_t, frame::kTagBytes>;
using Key256 = std::array<std::uint8_t, 32>;

enum class BackendKind { kModeled, kReal };
std::string to_string(BackendKind k);
std::optional<BackendKind> parse_backend(const std::string& s);

struct SessionKey {
  NodeId low = 0;  // unordered pair stored as (min, max)
  NodeId high = 0;
  Key256 key{};
  SimTime established_at;
};

struct SecureEnvelope {
  Nonce nonce{};
  Bytes ciphertext;
  Tag tag{};
  std::optional<Signature> signature;

  std::size_t overhead_bytes() const {
    return frame::kNonceBytes + frame::kTagBytes + (signature ? frame::kSignatureBytes : 0);
  }
};

/// 4-byte sender id followed by an 8-byte little-endian counter.
Nonce make_nonce(NodeId sender, std::uint64_t counter);
std::pair<NodeId, std::uint64_t> split_nonce(const Nonce& n);

class CryptoBackend {
 public:
  virtual ~CryptoBackend() = default;
  virtual BackendKind kind() const = 0;
  virtual std::size_t fleet_size() const = 0;

  virtual Signature sign(NodeId signer, ByteView msg) = 0;
  virtual bool verify(NodeId claimed_signer, ByteView msg, const Signature& sig) = 0;

  /// Empty when either id has no registered identity.
  virtual std::optional<SessionKey> derive_session_key(NodeId a, NodeId b, SimTime now = {}) = 0;

  virtual SecureEnvelope seal(const SessionKey& key, const Nonce& nonce, ByteView plain,
                              ByteView aad) = 0;
  virtual std::optional<Bytes> open(const SessionKey& key, const SecureEnvelope& env,
                                    ByteView aad) = 0;
};

/// Identities for nodes 0..fleet_size-1 are provisioned at construction
/// (trusted initialization). The modeled backend derives every key from
/// `seed`; the real backend draws keys from the system CSPRNG.
std::unique_ptr<CryptoBackend> make_backend(BackendKind kind, std::size_t fleet_size,
                                            std::uint64_t seed);
std::unique_ptr<CryptoBackend> make_modeled_backend(std::size_t fleet_size, std::uint64_t seed);
std::unique_ptr<CryptoBackend> make_real_backend(std::size_t fleet_size);

/// Per-node sender state: one strictly increasing counter per session peer.
/// Reusing or rewinding a nonce under a key is a protocol bug (HardFault).
class NonceGuard {
 public:
  explicit NonceGuard(NodeId self) : self_(self) {}
  Nonce next(NodeId peer);
  void claim(NodeId peer, const Nonce& n);
  std::uint64_t issued(NodeId peer) const;

 private:
  NodeId self_;
  std::map<NodeId, std::uint64_t> next_counter_;
};

/// Seals with a fresh nonce from `guard`.
SecureEnvelope seal_fresh(CryptoBackend& b, NonceGuard& guard, const SessionKey& key, NodeId peer,
                          ByteView plain, ByteView aad);

enum class CryptoOp { kSign, kVerify, kSeal, kOpen, kTrustUpdate };

struct CryptoTiming {
  SimTime aead_per_256 = SimTime::from_us(1600);
  SimTime verify = SimTime::from_us(3500);
  SimTime sign = SimTime::from_us(3500);
  SimTime trust_update = SimTime::from_us(80);
};

/// Modeled latency; AEAD cost is pro-rated by payload size (rounded to 1 us).
SimTime processing_delay(CryptoOp op, std::size_t payload_bytes, const CryptoTiming& t = {});

}  // namespace swarmnet::security
