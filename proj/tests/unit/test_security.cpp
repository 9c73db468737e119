#include <gtest/gtest.h>

#include "properties.hpp"
#include "swarmnet/security.hpp"

using namespace swarmnet;
using namespace swarmnet::security;

class Backends : public ::testing::TestWithParam<BackendKind> {};

TEST_P(Backends, SuiteMatchesExpectations) {
  for (const auto& c : props::crypto_suite(GetParam()))
    EXPECT_EQ(c.observed, c.expected) << c.name;
}

TEST_P(Backends, SizesMatchWireFormat) {
  auto b = make_backend(GetParam(), 3, 5);
  const auto k = b->derive_session_key(0, 1);
  ASSERT_TRUE(k);
  const Bytes plain(245, 0x5a);
  const auto env = b->seal(*k, make_nonce(0, 0), plain, {});
  EXPECT_EQ(env.ciphertext.size(), plain.size());
  EXPECT_EQ(env.overhead_bytes(), 28u);
  EXPECT_EQ(b->fleet_size(), 3u);
}

INSTANTIATE_TEST_SUITE_P(All, Backends, ::testing::Values(BackendKind::kModeled, BackendKind::kReal),
                         [](const auto& info) { return to_string(info.param); });

TEST(Backends, IdenticalDecisions) {
  const auto m = props::crypto_suite(BackendKind::kModeled);
  const auto r = props::crypto_suite(BackendKind::kReal);
  ASSERT_EQ(m.size(), r.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(m[i].name, r[i].name);
    EXPECT_EQ(m[i].observed, r[i].observed) << m[i].name;
  }
}

TEST(Modeled, SameSeedSameKeys) {
  auto a = make_modeled_backend(4, 9), b = make_modeled_backend(4, 9), c = make_modeled_backend(4, 10);
  const Bytes msg{1, 2, 3};
  EXPECT_EQ(a->sign(1, msg), b->sign(1, msg));
  EXPECT_NE(a->sign(1, msg), c->sign(1, msg));
  EXPECT_TRUE(b->verify(1, msg, a->sign(1, msg)));
}

TEST(Nonce, LayoutRoundTrip) {
  const auto n = make_nonce(0x0102, 0x0A0B0C0D0E0F1011ULL);
  EXPECT_EQ(n[0], 0x02);
  EXPECT_EQ(n[4], 0x11);
  const auto [id, ctr] = split_nonce(n);
  EXPECT_EQ(id, 0x0102);
  EXPECT_EQ(ctr, 0x0A0B0C0D0E0F1011ULL);
}

TEST(Nonce, GuardIssuesIncreasingCounters) {
  NonceGuard g(3);
  EXPECT_EQ(split_nonce(g.next(1)).second, 0u);
  EXPECT_EQ(split_nonce(g.next(1)).second, 1u);
  EXPECT_EQ(split_nonce(g.next(2)).second, 0u);
  EXPECT_EQ(g.issued(1), 2u);
  EXPECT_THROW(g.claim(1, make_nonce(4, 9)), HardFault);  // not ours
  g.claim(1, make_nonce(3, 10));
  EXPECT_EQ(split_nonce(g.next(1)).second, 11u);
}

TEST(Nonce, SealFreshNeverFaults) {
  auto b = make_modeled_backend(2, 1);
  const auto k = *b->derive_session_key(0, 1);
  NonceGuard g(0);
  const Bytes p(32, 1);
  for (int i = 0; i < 100; ++i) {
    const auto env = seal_fresh(*b, g, k, 1, p, {});
    ASSERT_EQ(*b->open(k, env, {}), p);
  }
}

TEST(Timing, ModeledDelays) {
  EXPECT_EQ(processing_delay(CryptoOp::kSeal, 256), SimTime::from_us(1600));
  EXPECT_EQ(processing_delay(CryptoOp::kOpen, 128), SimTime::from_us(800));
  EXPECT_EQ(processing_delay(CryptoOp::kSeal, 245), SimTime::from_us(1531));
  EXPECT_EQ(processing_delay(CryptoOp::kVerify, 0), SimTime::from_us(3500));
  EXPECT_EQ(processing_delay(CryptoOp::kTrustUpdate, 0), SimTime::from_us(80));
}

TEST(Backend, Parse) {
  EXPECT_EQ(parse_backend("real"), BackendKind::kReal);
  EXPECT_EQ(parse_backend("modeled"), BackendKind::kModeled);
  EXPECT_FALSE(parse_backend("fast").has_value());
}
