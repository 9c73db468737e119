#include <gtest/gtest.h>

#include "swarmnet/frame.hpp"
#include "swarmnet/metrics.hpp"

using namespace swarmnet;
using namespace swarmnet::frame;

TEST(Header, RoundTrip) {
  const Header h{FrameType::kTrustUpdate, 513, 0xFFFF, 0xDEADBEEF, 92};
  std::vector<std::uint8_t> buf;
  encode_header(h, buf);
  ASSERT_EQ(buf.size(), kHeaderBytes);
  EXPECT_EQ(buf[1], 0x01);  // little-endian src
  EXPECT_EQ(buf[2], 0x02);
  EXPECT_EQ(decode_header(buf), h);
}

TEST(Header, RejectsShortOrUnknown) {
  std::vector<std::uint8_t> buf;
  encode_header(Header{}, buf);
  EXPECT_FALSE(decode_header(std::span(buf).first(10)).has_value());
  buf[0] = 99;
  EXPECT_FALSE(decode_header(buf).has_value());
}

TEST(WireSize, DataFrame) {
  const auto w = wire_size(FrameType::kData, data_body(256));
  EXPECT_EQ(w.body, 245u);
  EXPECT_EQ(w.trailer(), 28u);
  EXPECT_EQ(w.total(), 284u);
  EXPECT_EQ(w.overhead(), 28u);
}

TEST(WireSize, SignedControlFrames) {
  const auto b = wire_size(FrameType::kBeacon, kBeaconBody);
  EXPECT_EQ(b.total(), 52u + 92u);
  EXPECT_EQ(b.overhead(), b.total());
  EXPECT_EQ(wire_size(FrameType::kBeacon, kBeaconBody, false).total(), 52u);
  EXPECT_EQ(trust_update_body(3), 1u + 48u);
  EXPECT_EQ(schedule_body(5), 14u);
}

TEST(Overhead, BeaconPlusDataFrame) {
  metrics::OverheadCounters c;
  metrics::FrameTally t;
  for (const auto& w : {wire_size(FrameType::kBeacon, kBeaconBody, false),
                        wire_size(FrameType::kData, data_body(256))}) {
    c.add(w);
    t.add(w);
  }
  EXPECT_EQ(c.overhead(), 52u + 28u);
  EXPECT_EQ(c.total(), 52u + 256u + 28u);
  EXPECT_NEAR(metrics::overhead_fraction(c.overhead(), c.total()), 80.0 / 336.0, 1e-15);
  EXPECT_NEAR(metrics::overhead_fraction(c.overhead(), c.total()), 0.2381, 5e-5);
  EXPECT_EQ(t.overhead, c.overhead());
  EXPECT_EQ(t.total, c.total());
}

TEST(Overhead, Extremes) {
  metrics::OverheadCounters only_data, only_beacons;
  only_data.add(wire_size(FrameType::kData, 245, false));
  EXPECT_EQ(metrics::overhead_fraction(only_data.overhead(), only_data.total()), 0.0);
  only_beacons.add(wire_size(FrameType::kBeacon, kBeaconBody));
  EXPECT_EQ(metrics::overhead_fraction(only_beacons.overhead(), only_beacons.total()), 1.0);
  EXPECT_EQ(metrics::overhead_fraction(0, 0), 0.0);
}
