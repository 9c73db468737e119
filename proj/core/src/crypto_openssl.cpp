#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/ecdsa.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <cstring>
#include <stdexcept>

#include "crypto_internal.hpp"

namespace swarmnet::security {
namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};

[[noreturn]] void fail(const char* what) { throw std::runtime_error(std::string("openssl: ") + what); }

class RealBackend final : public CryptoBackend {
 public:
  explicit RealBackend(std::size_t fleet) {
    keys_.reserve(fleet);
    for (std::size_t i = 0; i < fleet; ++i) {
      PkeyPtr k(EVP_PKEY_Q_keygen(nullptr, nullptr, "EC", "P-256"));
      if (!k) fail("P-256 key generation");
      keys_.push_back(std::move(k));
    }
  }

  BackendKind kind() const override { return BackendKind::kReal; }
  std::size_t fleet_size() const override { return keys_.size(); }

  Signature sign(NodeId signer, ByteView msg) override {
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    if (EVP_DigestSignInit(ctx.get(), nullptr, EVP_sha256(), nullptr, keys_.at(signer).get()) != 1)
      fail("sign init");
    std::size_t der_len = 0;
    if (EVP_DigestSign(ctx.get(), nullptr, &der_len, msg.data(), msg.size()) != 1) fail("sign size");
    Bytes der(der_len);
    if (EVP_DigestSign(ctx.get(), der.data(), &der_len, msg.data(), msg.size()) != 1) fail("sign");
    const unsigned char* p = der.data();
    ECDSA_SIG* sig = d2i_ECDSA_SIG(nullptr, &p, static_cast<long>(der_len));
    if (sig == nullptr) fail("signature decode");
    Signature out{};
    BN_bn2binpad(ECDSA_SIG_get0_r(sig), out.data(), 32);
    BN_bn2binpad(ECDSA_SIG_get0_s(sig), out.data() + 32, 32);
    ECDSA_SIG_free(sig);
    return out;
  }

  bool verify(NodeId claimed, ByteView msg, const Signature& raw) override {
    if (claimed >= keys_.size()) return false;
    ECDSA_SIG* sig = ECDSA_SIG_new();
    BIGNUM* r = BN_bin2bn(raw.data(), 32, nullptr);
    BIGNUM* s = BN_bin2bn(raw.data() + 32, 32, nullptr);
    ECDSA_SIG_set0(sig, r, s);
    unsigned char* der = nullptr;
    const int der_len = i2d_ECDSA_SIG(sig, &der);
    ECDSA_SIG_free(sig);
    if (der_len <= 0) return false;
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    bool ok = EVP_DigestVerifyInit(ctx.get(), nullptr, EVP_sha256(), nullptr,
                                   keys_[claimed].get()) == 1 &&
              EVP_DigestVerify(ctx.get(), der, static_cast<std::size_t>(der_len), msg.data(),
                               msg.size()) == 1;
    OPENSSL_free(der);
    return ok;
  }

  std::optional<SessionKey> derive_session_key(NodeId a, NodeId b, SimTime now) override {
    if (a >= keys_.size() || b >= keys_.size() || a == b) return std::nullopt;
    SessionKey k;
    k.low = std::min(a, b);
    k.high = std::max(a, b);
    k.established_at = now;

    std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter> dctx(
        EVP_PKEY_CTX_new_from_pkey(nullptr, keys_[k.low].get(), nullptr));
    if (!dctx || EVP_PKEY_derive_init(dctx.get()) != 1 ||
        EVP_PKEY_derive_set_peer(dctx.get(), keys_[k.high].get()) != 1)
      fail("ecdh init");
    std::size_t secret_len = 0;
    EVP_PKEY_derive(dctx.get(), nullptr, &secret_len);
    Bytes secret(secret_len);
    if (EVP_PKEY_derive(dctx.get(), secret.data(), &secret_len) != 1) fail("ecdh");

    std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter> kctx(
        EVP_PKEY_CTX_new_from_name(nullptr, "HKDF", nullptr));
    const unsigned char salt[] = "swarmnet-session";
    unsigned char info[4] = {static_cast<unsigned char>(k.low), static_cast<unsigned char>(k.low >> 8),
                             static_cast<unsigned char>(k.high),
                             static_cast<unsigned char>(k.high >> 8)};
    std::size_t out_len = k.key.size();
    if (!kctx || EVP_PKEY_derive_init(kctx.get()) != 1 ||
        EVP_PKEY_CTX_set_hkdf_md(kctx.get(), EVP_sha256()) != 1 ||
        EVP_PKEY_CTX_set1_hkdf_salt(kctx.get(), salt, sizeof salt - 1) != 1 ||
        EVP_PKEY_CTX_set1_hkdf_key(kctx.get(), secret.data(), static_cast<int>(secret_len)) != 1 ||
        EVP_PKEY_CTX_add1_hkdf_info(kctx.get(), info, sizeof info) != 1 ||
        EVP_PKEY_derive(kctx.get(), k.key.data(), &out_len) != 1)
      fail("hkdf");
    return k;
  }

  SecureEnvelope seal(const SessionKey& key, const Nonce& nonce, ByteView plain,
                      ByteView aad) override {
    nonces_.consume(key, nonce);
    std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx(EVP_CIPHER_CTX_new());
    SecureEnvelope env;
    env.nonce = nonce;
    env.ciphertext.resize(plain.size());
    int len = 0;
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.key.data(), nonce.data()) != 1)
      fail("gcm init");
    if (!aad.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
      fail("gcm aad");
    if (!plain.empty() && EVP_EncryptUpdate(ctx.get(), env.ciphertext.data(), &len, plain.data(),
                                            static_cast<int>(plain.size())) != 1)
      fail("gcm encrypt");
    unsigned char scratch[16];
    if (EVP_EncryptFinal_ex(ctx.get(), scratch, &len) != 1) fail("gcm final");
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, static_cast<int>(env.tag.size()),
                            env.tag.data()) != 1)
      fail("gcm tag");
    return env;
  }

  std::optional<Bytes> open(const SessionKey& key, const SecureEnvelope& env,
                            ByteView aad) override {
    std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx(EVP_CIPHER_CTX_new());
    Bytes plain(env.ciphertext.size());
    int len = 0;
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.key.data(),
                           env.nonce.data()) != 1)
      fail("gcm init");
    if (!aad.empty() &&
        EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
      return std::nullopt;
    if (!env.ciphertext.empty() &&
        EVP_DecryptUpdate(ctx.get(), plain.data(), &len, env.ciphertext.data(),
                          static_cast<int>(env.ciphertext.size())) != 1)
      return std::nullopt;
    Tag tag = env.tag;
    EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, static_cast<int>(tag.size()), tag.data());
    unsigned char scratch[16];
    if (EVP_DecryptFinal_ex(ctx.get(), scratch, &len) != 1) return std::nullopt;
    return plain;
  }

 private:
  std::vector<PkeyPtr> keys_;
  detail::NonceLedger nonces_;
};

}  // namespace

std::unique_ptr<CryptoBackend> make_real_backend(std::size_t fleet_size) {
  return std::make_unique<RealBackend>(fleet_size);
}

}  // namespace swarmnet::security
