// Keyed-hash stand-ins. These are deterministic and size-compatible with the
// real primitives but make no security claim: "public" verification uses the
// same registry secret as signing.

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

#include "crypto_internal.hpp"

namespace swarmnet::security {
namespace {

class Digest {
 public:
  explicit Digest(const char* name)
      : md_(EVP_MD_fetch(nullptr, name, nullptr)), ctx_(EVP_MD_CTX_new()) {
    if (md_ == nullptr || ctx_ == nullptr) throw std::runtime_error("digest unavailable");
  }
  ~Digest() {
    EVP_MD_CTX_free(ctx_);
    EVP_MD_free(md_);
  }
  Digest(const Digest&) = delete;
  Digest& operator=(const Digest&) = delete;

  void begin() { EVP_DigestInit_ex(ctx_, md_, nullptr); }
  void add(ByteView b) { EVP_DigestUpdate(ctx_, b.data(), b.size()); }
  void add_u64(std::uint64_t v) {
    std::uint8_t le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(v >> (8 * i));
    EVP_DigestUpdate(ctx_, le, 8);
  }
  void finish(std::uint8_t* out) { EVP_DigestFinal_ex(ctx_, out, nullptr); }

 private:
  EVP_MD* md_;
  EVP_MD_CTX* ctx_;
};

ByteView view(const char* s) {
  return {reinterpret_cast<const std::uint8_t*>(s), std::strlen(s)};
}

std::uint64_t splitmix(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class ModeledBackend final : public CryptoBackend {
 public:
  ModeledBackend(std::size_t fleet, std::uint64_t seed)
      : sha256_("SHA256"), sha512_("SHA512"), secrets_(fleet) {
    sha256_.begin();
    sha256_.add(view("swarm"));
    sha256_.add_u64(seed);
    sha256_.finish(swarm_secret_.data());
    for (std::size_t i = 0; i < fleet; ++i) {
      sha256_.begin();
      sha256_.add(swarm_secret_);
      sha256_.add(view("identity"));
      sha256_.add_u64(i);
      sha256_.finish(secrets_[i].data());
    }
  }

  BackendKind kind() const override { return BackendKind::kModeled; }
  std::size_t fleet_size() const override { return secrets_.size(); }

  Signature sign(NodeId signer, ByteView msg) override {
    return mac512(secrets_.at(signer), msg);
  }

  bool verify(NodeId claimed, ByteView msg, const Signature& sig) override {
    if (claimed >= secrets_.size()) return false;
    const auto expect = mac512(secrets_[claimed], msg);
    return CRYPTO_memcmp(expect.data(), sig.data(), sig.size()) == 0;
  }

  std::optional<SessionKey> derive_session_key(NodeId a, NodeId b, SimTime now) override {
    if (a >= secrets_.size() || b >= secrets_.size() || a == b) return std::nullopt;
    SessionKey k;
    k.low = std::min(a, b);
    k.high = std::max(a, b);
    k.established_at = now;
    sha256_.begin();
    sha256_.add(swarm_secret_);
    sha256_.add(view("session"));
    sha256_.add_u64(k.low);
    sha256_.add_u64(k.high);
    sha256_.finish(k.key.data());
    return k;
  }

  SecureEnvelope seal(const SessionKey& key, const Nonce& nonce, ByteView plain,
                      ByteView aad) override {
    nonces_.consume(key, nonce);
    SecureEnvelope env;
    env.nonce = nonce;
    env.ciphertext.assign(plain.begin(), plain.end());
    apply_keystream(key, nonce, env.ciphertext);
    env.tag = tag(key, nonce, aad, env.ciphertext);
    return env;
  }

  std::optional<Bytes> open(const SessionKey& key, const SecureEnvelope& env,
                            ByteView aad) override {
    const auto expect = tag(key, env.nonce, aad, env.ciphertext);
    if (CRYPTO_memcmp(expect.data(), env.tag.data(), expect.size()) != 0) return std::nullopt;
    Bytes plain = env.ciphertext;
    apply_keystream(key, env.nonce, plain);
    return plain;
  }

 private:
  Signature mac512(const Key256& secret, ByteView msg) {
    Signature out{};
    sha512_.begin();
    sha512_.add(secret);
    sha512_.add_u64(msg.size());
    sha512_.add(msg);
    sha512_.finish(out.data());
    return out;
  }

  void apply_keystream(const SessionKey& key, const Nonce& nonce, Bytes& data) {
    std::array<std::uint8_t, 32> seed{};
    sha256_.begin();
    sha256_.add(key.key);
    sha256_.add(view("stream"));
    sha256_.add(nonce);
    sha256_.finish(seed.data());
    std::uint64_t state = 0;
    std::memcpy(&state, seed.data(), sizeof state);
    for (std::size_t i = 0; i < data.size(); i += 8) {
      const std::uint64_t ks = splitmix(state);
      for (std::size_t j = 0; j < 8 && i + j < data.size(); ++j)
        data[i + j] ^= static_cast<std::uint8_t>(ks >> (8 * j));
    }
  }

  Tag tag(const SessionKey& key, const Nonce& nonce, ByteView aad, ByteView ct) {
    std::array<std::uint8_t, 32> full{};
    sha256_.begin();
    sha256_.add(key.key);
    sha256_.add(view("tag"));
    sha256_.add(nonce);
    sha256_.add_u64(aad.size());
    sha256_.add(aad);
    sha256_.add_u64(ct.size());
    sha256_.add(ct);
    sha256_.finish(full.data());
    Tag t{};
    std::memcpy(t.data(), full.data(), t.size());
    return t;
  }

  Digest sha256_;
  Digest sha512_;
  Key256 swarm_secret_{};
  std::vector<Key256> secrets_;
  detail::NonceLedger nonces_;
};

}  // namespace

std::unique_ptr<CryptoBackend> make_modeled_backend(std::size_t fleet_size, std::uint64_t seed) {
  return std::make_unique<ModeledBackend>(fleet_size, seed);
}

}  // namespace swarmnet::security
