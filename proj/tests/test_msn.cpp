#include "neuromac/msn.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "neuromac/report.hpp"
#include "test_profiles.hpp"

namespace {

using namespace neuromac;

TEST(SynapseConfig, SliceCurrentsAreBinaryWeighted) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const auto tails = cfg.synapse.tails();
  ASSERT_EQ(tails.size(), 8u);
  for (int j = 1; j <= 8; ++j) {
    EXPECT_DOUBLE_EQ(tails[static_cast<std::size_t>(j - 1)],
                     std::ldexp(cfg.synapse.i_unit, j - 1));
  }
  EXPECT_NEAR(cfg.synapse.total_current(), 255 * cfg.synapse.i_unit, 1e-21);
}

TEST(SynapseConfig, ExplicitSliceCurrentsMustSumCorrectly) {
  auto cfg = testutil::msn_profile("msn-small-8b");
  cfg.synapse.slice_currents.assign(8, cfg.synapse.i_unit);  // sums to 8, not 255
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(MsnSmallGain, ZeroCodeGivesZeroGain) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  EXPECT_EQ(msn_small_gain(cfg, 0), 0.0);
}

TEST(MsnSmallGain, FullScaleMatchesTypicalRowCalibration) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  const double gain = msn_small_gain(cfg, 255);
  EXPECT_LT(gain, 0.0);  // inverting
  EXPECT_NEAR(20.0 * std::log10(std::fabs(gain)), -0.457, 0.005);
}

// Brute-force oracle over all 256 codes: |gain| strictly increases with the
// weight code at nominal mismatch, and never exceeds unity.
TEST(MsnSmallGain, MagnitudeStrictlyIncreasingOverCodes) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  double prev = -1.0;
  for (int code = 0; code < 256; ++code) {
    const double mag = std::fabs(msn_small_gain(cfg, code));
    EXPECT_GT(mag, prev);
    EXPECT_LE(mag, 1.0);
    prev = mag;
  }
}

TEST(MsnSmallGain, CodeRangeAndTopologyGuards) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  EXPECT_THROW(msn_small_gain(cfg, -1), DomainError);
  EXPECT_THROW(msn_small_gain(cfg, 256), DomainError);
  const auto fb = testutil::msn_profile("msn-feedback-8b-tt");
  EXPECT_THROW(msn_small_gain(fb, 255), DomainError);
}

TEST(MsnBandwidth, HandEvaluatedEqSix) {
  auto cfg = testutil::msn_profile("msn-small-8b");
  cfg.synapse.i_unit = 100e-12;
  cfg.synapse.slice_currents.clear();
  cfg.synapse.c_unit = 0.4e-15;  // C_eff = 3.2 fF
  EXPECT_NEAR(msn_bandwidth(cfg), 18.76e6, 0.02e6);
}

TEST(MsnBandwidth, LinearInUnitCurrentAndInverseInCap) {
  auto cfg = testutil::msn_profile("msn-small-8b");
  const double base = msn_bandwidth(cfg);
  auto doubled = cfg;
  doubled.synapse.i_unit *= 2.0;
  EXPECT_NEAR(msn_bandwidth(doubled), 2.0 * base, 1e-9 * base);
  auto heavier = cfg;
  heavier.synapse.c_unit *= 2.0;
  EXPECT_NEAR(msn_bandwidth(heavier), 0.5 * base, 1e-9 * base);
}

TEST(MsnOutputNoise, HandEvaluatedPsdAndIntegral) {
  auto cfg = testutil::msn_profile("msn-small-8b");
  cfg.synapse.i_unit = 100e-12;
  cfg.synapse.slice_currents.clear();
  const auto noise = msn_output_noise(cfg);
  EXPECT_NEAR(noise.psd_v2_per_hz, 5.742e-14, 0.002e-14);

  cfg.synapse.c_unit = 4e-15;  // C_eff = 32 fF
  EXPECT_NEAR(msn_output_noise(cfg).integrated_v2, 1.077e-7, 0.002e-7);
}

TEST(MsnOutputNoise, IntegralIndependentOfBiasCurrent) {
  auto cfg = testutil::msn_profile("msn-small-8b");
  double reference = 0.0;
  for (double i_unit : {10e-12, 100e-12, 1e-9}) {
    cfg.synapse.i_unit = i_unit;
    cfg.synapse.slice_currents.clear();
    const double integrated = msn_output_noise(cfg).integrated_v2;
    if (reference == 0.0) {
      reference = integrated;
    } else {
      EXPECT_DOUBLE_EQ(integrated, reference);
    }
  }
}

TEST(PoleZero, HandEvaluatedPair) {
  // gm_p = 1 uS, sum gm_in = 3 uS, N = 8, R = 8 Mohm, sum C_gd = 8 fF.
  const auto pz = pole_zero_from(1e-6, 3e-6, 8, 8e6, 8e-15);
  EXPECT_NEAR(pz.pole_hz, 39.79e6, 0.02e6);
  EXPECT_NEAR(pz.zero_hz, pz.pole_hz, 1e-3);  // exact cancellation at this R
}

TEST(PoleZero, OpenLoopLimit) {
  const auto pz = pole_zero_from(1e-6, 3e-6, 8, 1e18, 8e-15);
  EXPECT_NEAR(pz.pole_hz, 1e-6 / (constants::kTwoPi * 8e-15), 1.0);
  EXPECT_NEAR(pz.zero_hz, 3e-6 / (constants::kTwoPi * 8e-15), 1.0);
}

TEST(PoleZero, DegenerateCompensationWhenFeedbackDominates) {
  EXPECT_THROW(pole_zero_from(1e-6, 3e-6, 8, 1e6, 8e-15), DegenerateCompensation);
}

TEST(SolveFeedbackResistance, HandEvaluated) {
  EXPECT_NEAR(solve_feedback_resistance_from(3e-6, 1e-6, 8), 8e6, 1.0);
  EXPECT_NEAR(solve_feedback_resistance_from(2e-6, 1e-6, 1), 2e6, 1.0);
}

TEST(SolveFeedbackResistance, DivergesAsMarginCloses) {
  double prev = 0.0;
  for (double margin : {1e-6, 1e-7, 1e-8, 1e-9}) {
    const double r = solve_feedback_resistance_from(1e-6 + margin, 1e-6, 8);
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_THROW(solve_feedback_resistance_from(1e-6, 1e-6, 8),
               DegenerateCompensation);
}

TEST(FeedbackGain, FullScaleMatchesTypicalRow) {
  const auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  const double gain = feedback_gain(cfg, 255);
  EXPECT_NEAR(20.0 * std::log10(std::fabs(gain)), -0.457, 0.005);
}

TEST(FeedbackGain, NumeratorNullsWhereActiveGmEqualsFeedback) {
  auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  // Enlarge R so g_feedback sits between code 0 and code 1 transconductance:
  // somewhere along the code axis the numerator changes sign.
  const double g0 = feedback_gain(cfg, 0);
  const double g255 = feedback_gain(cfg, 255);
  EXPECT_GT(g0, 0.0);   // -kappa*(0 - N/R)/G > 0
  EXPECT_LT(g255, 0.0); // inverting at full scale
}

// R -> infinity recovers the open-loop gain form (with the input gm sum in
// the denominator, as the feedback stage's conductance budget has it).
TEST(FeedbackGain, InfiniteResistanceRecoversOpenLoopForm) {
  auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  cfg.feedback_r = 1e18;
  const auto op = ms_operating_point(cfg);
  const double expected =
      -op.kappa * (op.gm_input_sum - op.g_feedback) /
      (op.gm_load + op.gds_load + op.gm_input_sum + op.g_feedback);
  EXPECT_NEAR(feedback_gain(cfg, 255), expected, 1e-15);
  EXPECT_LT(op.g_feedback, 1e-15);  // vanishing N/R at this R
}

TEST(FeedbackPoleZero, AutoSolvedResistanceCancelsExactly) {
  auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  cfg.feedback_r = 0.0;  // solve via the cancellation condition
  const auto pz = feedback_pole_zero(cfg);
  EXPECT_DOUBLE_EQ(pz.pole_hz, pz.zero_hz);
  const double r = solve_feedback_resistance(cfg);
  EXPECT_GT(r, 0.0);
}

TEST(FeedbackBandwidth, CompensationExceedsOpenLoop) {
  auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  EXPECT_GT(feedback_bandwidth(cfg), open_loop_bandwidth(cfg));
  cfg.feedback_r = 0.0;
  EXPECT_GT(feedback_bandwidth(cfg), open_loop_bandwidth(cfg));
}

TEST(FeedbackBandwidth, TypicalRowCalibration) {
  const auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  EXPECT_NEAR(feedback_bandwidth(cfg), 292.2e6, 0.3e6);
}

TEST(Offsets, SmallAndFeedbackProfilesMatchTargets) {
  EXPECT_NEAR(offset_3sigma(testutil::msn_profile("msn-small-8b")), 98e-3, 1e-3);
  EXPECT_NEAR(offset_3sigma(testutil::msn_profile("msn-feedback-8b-tt")), 2.5e-3,
              0.05e-3);
}

TEST(EvaluateNeuron, TypicalRowReport) {
  const auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  const auto rep = evaluate_neuron(cfg);
  EXPECT_NEAR(rep.power_w, 20.8e-9, 0.05e-9);
  EXPECT_NEAR(rep.bandwidth_hz, 292.2e6, 0.5e6);
  EXPECT_NEAR(rep.gain_db, -0.457, 0.005);
  EXPECT_NEAR(rep.integrated_noise_v2, 6.3e-8, 0.05e-8);
  EXPECT_NEAR(rep.energy_per_mac_j, 71.2e-18, 0.5e-18);
  EXPECT_DOUBLE_EQ(rep.energy_per_mac_j, rep.power_w / rep.bandwidth_hz);
  EXPECT_GT(rep.pole_hz, 0.0);
  EXPECT_GT(rep.zero_hz, rep.pole_hz);
}

// Power is linear in bandwidth at fixed geometry: sweeping the unit current
// over three decades leaves energy per MAC constant to well under 0.1%.
TEST(MsnBandwidth, EnergyPerMacConstantOverUnitCurrentDecades) {
  auto cfg = testutil::msn_profile("msn-small-8b");
  double reference = 0.0;
  for (double i_unit = 10e-12; i_unit <= 10.001e-9; i_unit *= std::pow(10.0, 0.5)) {
    cfg.synapse.i_unit = i_unit;
    cfg.synapse.slice_currents.clear();
    const double power = cfg.synapse.vdd_ana * cfg.fan_in_n * 255.0 * i_unit;
    const double energy = power / msn_bandwidth(cfg);
    if (reference == 0.0) {
      reference = energy;
    } else {
      EXPECT_NEAR(energy, reference, 1e-3 * reference);
    }
  }
}

TEST(EvaluateNeuron, SmallSignalEnergyConstantAcrossRetargets) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  double reference = 0.0;
  for (double f : {1e5, 1e6, 1e7, 1e8}) {
    const auto rep = evaluate_neuron(cfg, f);
    EXPECT_NEAR(rep.bandwidth_hz, f, 1e-6 * f);
    if (reference == 0.0) {
      reference = rep.energy_per_mac_j;
      EXPECT_NEAR(reference, 0.8e-15, 0.01e-15);
    } else {
      EXPECT_NEAR(rep.energy_per_mac_j, reference, 1e-9 * reference);
    }
  }
}

TEST(EvaluateNeuron, LargeSignalNinePicojoule) {
  const auto cfg = testutil::msn_profile("msn-large-8b");
  const auto rep = evaluate_neuron(cfg);
  EXPECT_NEAR(rep.energy_per_mac_j, 0.9e-12, 0.01e-12);
  for (double f : {1e5, 1e6, 1e7}) {
    EXPECT_NEAR(evaluate_neuron(cfg, f).energy_per_mac_j, rep.energy_per_mac_j,
                1e-9 * rep.energy_per_mac_j);
  }
}

// The large-signal asymmetry: bandwidth follows the minimum nonzero weight,
// power the maximum. Evaluated at nominal bias, the implied bandwidth uses
// one unit slice while the power draws all 255.
TEST(EvaluateNeuron, LargeSignalMinWeightBandwidthAsymmetry) {
  const auto cfg = testutil::msn_profile("msn-large-8b");
  const auto rep = evaluate_neuron(cfg);
  const double c_large = cfg.fan_in_n * 255.0 * cfg.synapse.c_unit;
  const double gm_min = gm_subthreshold(0.5 * cfg.synapse.i_unit, cfg.device);
  EXPECT_NEAR(rep.bandwidth_hz, gm_min / (constants::kTwoPi * c_large),
              1e-6 * rep.bandwidth_hz);
  EXPECT_NEAR(rep.power_w, cfg.synapse.vdd_ana * 255.0 * cfg.synapse.i_unit,
              1e-12 * rep.power_w);
}

TEST(EvaluateNeuron, RejectsNegativeFrequency) {
  const auto cfg = testutil::msn_profile("msn-small-8b");
  EXPECT_THROW(evaluate_neuron(cfg, -1.0), DomainError);
}

TEST(OperatingPoint, GainMagnitudeBoundedForFeedbackCodes) {
  const auto cfg = testutil::msn_profile("msn-feedback-8b-tt");
  for (int code = 0; code < 256; ++code) {
    EXPECT_LE(std::fabs(feedback_gain(cfg, code)), 1.0);
  }
}

}  // namespace
