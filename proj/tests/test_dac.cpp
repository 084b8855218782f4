#include "neuromac/dac.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_profiles.hpp"

namespace {

using namespace neuromac;

TEST(DiffpairTransfer, OddSymmetry) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  EXPECT_EQ(diffpair_transfer(0.0, cfg), 0.0);
  for (double v : {1e-3, 0.05, 0.2, 0.5}) {
    EXPECT_DOUBLE_EQ(diffpair_transfer(-v, cfg), -diffpair_transfer(v, cfg));
  }
}

// Finite-difference oracle: the slope at the origin equals the small-signal
// gain magnitude to 0.1%.
TEST(DiffpairTransfer, OriginSlopeMatchesSmallSignalGain) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const double h = 1e-6;
  const double slope = (diffpair_transfer(h, cfg) - diffpair_transfer(-h, cfg)) /
                       (2.0 * h);
  const double gain = std::fabs(msn_small_gain(cfg, 255));
  EXPECT_NEAR(slope, gain, 1e-3 * gain);
}

TEST(Thd, TinySwingIsNearlyLinear) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  EXPECT_LT(thd(cfg, 1e-3, 10), 1e-5);
}

TEST(Thd, FullSwingUnderFivePercent) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const double t = thd(cfg, 0.4, 10);
  EXPECT_LT(t, 0.05);
  EXPECT_GT(t, 0.005);  // visibly nonlinear at full swing
  // The feedback design sits at the same gain; same distortion budget.
  EXPECT_LT(thd(testutil::msn_profile("msn-feedback-8b-tt"), 0.4, 10), 0.05);
}

// Brute-force sweep oracle: THD of the saturating transfer is monotone
// nondecreasing in swing.
TEST(Thd, MonotoneInSwing) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  double prev = 0.0;
  for (double swing = 0.05; swing <= 0.85; swing += 0.1) {
    const double t = thd(cfg, swing, 10);
    EXPECT_GE(t, prev);
    prev = t;
  }
}

TEST(Thd, ParameterGuards) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  EXPECT_THROW(thd(cfg, 0.0, 10), DomainError);
  EXPECT_THROW(thd(cfg, 0.4, 4), DomainError);
}

TEST(DacTransfer, EndpointsAndMonotonicity) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const auto t = dac_transfer(cfg);
  ASSERT_EQ(t.size(), 256u);
  EXPECT_EQ(t.front(), 0.0);
  for (std::size_t c = 1; c < t.size(); ++c) {
    EXPECT_GT(t[c], t[c - 1]);
  }
  EXPECT_DOUBLE_EQ(t.back(), std::fabs(msn_small_gain(cfg, 255)));
}

// The EKV interpolation makes the high-current slices transconductance-poor
// relative to binary weighting: the curve sags below the endpoint line
// (negative mid-code INL) and the major-carry step falls short, visibly but
// well inside half an LSB.
TEST(DacTransfer, NominalCurveIsSlightlyCompressive) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const auto d = dnl_inl(dac_transfer(cfg));
  EXPECT_LT(d.inl[128], -0.01);
  EXPECT_LT(d.dnl[127], -0.01);  // MSB carry step is short
  EXPECT_GT(d.worst_dnl, 0.01);
  EXPECT_LT(d.worst_dnl, 0.5);
  EXPECT_LT(d.worst_inl, 0.5);
}

TEST(DacTransfer, PureSubthresholdIsExactlyLinear) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const auto t = dac_transfer_subthreshold(cfg);
  const auto d = dnl_inl(t);
  EXPECT_LT(d.worst_dnl, 1e-9);
  EXPECT_LT(d.worst_inl, 1e-9);
}

TEST(DnlInl, HandComputedFragment) {
  // Transfer [0, 1, 3]: LSB = 1.5, DNL = [-1/3, +1/3].
  const auto d = dnl_inl({0.0, 1.0, 3.0});
  ASSERT_EQ(d.dnl.size(), 2u);
  ASSERT_EQ(d.inl.size(), 3u);
  EXPECT_NEAR(d.dnl[0], -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(d.dnl[1], 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(d.no_missing_code);
}

TEST(DnlInl, LinearRampIsIdenticallyZero) {
  std::vector<double> ramp(64);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.25 * static_cast<double>(i);
  const auto d = dnl_inl(ramp);
  EXPECT_EQ(d.worst_dnl, 0.0);
  EXPECT_EQ(d.worst_inl, 0.0);
}

// Standard identity: the DNL prefix sum equals the INL, exactly as computed.
TEST(DnlInl, PrefixSumIdentity) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const auto t = dac_transfer(cfg);
  const auto d = dnl_inl(t);
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < t.size(); ++c) {
    acc += d.dnl[c];
    EXPECT_NEAR(acc, d.inl[c + 1], 1e-9);
  }
  EXPECT_NEAR(d.inl.front(), 0.0, 1e-12);
  EXPECT_NEAR(d.inl.back(), 0.0, 1e-9);
}

TEST(DnlInl, DegenerateTransferRejected) {
  EXPECT_THROW(dnl_inl({1.0, 1.0, 1.0}), DegenerateTransfer);
  EXPECT_THROW(dnl_inl({1.0}), DomainError);
}

TEST(DacTransfer, FeedbackTopologyMonotoneWithOffsetFloor) {
  const auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  const auto t = dac_transfer(cfg);
  ASSERT_EQ(t.size(), 256u);
  EXPECT_LT(t.front(), 0.0);  // -kappa*N/(R*G) at code zero
  for (std::size_t c = 1; c < t.size(); ++c) {
    EXPECT_GT(t[c], t[c - 1]);
  }
}

}  // namespace
