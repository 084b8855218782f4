#pragma once

// Activation transfer, harmonic distortion and the weight-DAC linearity
// metrics (DNL/INL) of the mixed-signal multiplier.

#include <cmath>
#include <limits>
#include <vector>

#include "neuromac/constants.hpp"
#include "neuromac/errors.hpp"
#include "neuromac/msn.hpp"

namespace neuromac {

// Saturating differential-pair transfer: out = V_sat * tanh(k*v/V_sat).
// k is the small-signal gain magnitude at the operating weight; V_sat is
// the single-ended output swing limit, a fixed fraction of the analog
// supply (headroom of the tail source and load taken off the rail).
inline double diffpair_vsat(const NeuronConfig& cfg) {
  return 0.3 * cfg.synapse.vdd_ana;
}

inline double diffpair_transfer(double v_in_diff, const NeuronConfig& cfg) {
  const int full_scale = cfg.synapse.code_count() - 1;
  const double k = std::fabs(cfg.topology == MsTopology::MsFeedback
                                 ? feedback_gain(cfg, full_scale)
                                 : msn_small_gain(cfg, full_scale));
  const double v_sat = diffpair_vsat(cfg);
  return v_sat * std::tanh(k * v_in_diff / v_sat);
}

// Total harmonic distortion of the transfer driven by a full-swing sine,
// as a fraction. Discrete Fourier analysis over one exact period.
inline double thd(const NeuronConfig& cfg, double swing_diff, int harmonics) {
  if (swing_diff <= 0.0) throw DomainError("thd: swing must be > 0");
  if (harmonics < 5) throw DomainError("thd: need at least 5 harmonics");
  const int samples = 1024;
  std::vector<double> y(samples);
  const double amp = 0.5 * swing_diff;  // differential amplitude about zero
  for (int i = 0; i < samples; ++i) {
    const double theta = constants::kTwoPi * i / samples;
    y[static_cast<std::size_t>(i)] = diffpair_transfer(amp * std::sin(theta), cfg);
  }
  auto harmonic_power = [&](int h) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double theta = constants::kTwoPi * h * i / samples;
      re += y[static_cast<std::size_t>(i)] * std::cos(theta);
      im += y[static_cast<std::size_t>(i)] * std::sin(theta);
    }
    return re * re + im * im;
  };
  const double p1 = harmonic_power(1);
  if (p1 <= 0.0) throw DegenerateTransfer("thd: no fundamental present");
  double ph = 0.0;
  for (int h = 2; h <= harmonics; ++h) ph += harmonic_power(h);
  return std::sqrt(ph / p1);
}

// Composite weight-to-gain transfer over all 2^N codes. The EKV model makes
// the higher-current slices slightly transconductance-poor, so the nominal
// curve is mildly compressive; mismatch perturbs the slice currents.
inline std::vector<double> dac_transfer(const NeuronConfig& cfg,
                                        const MismatchSample& mismatch = {}) {
  if (cfg.topology == MsTopology::MsLarge) {
    throw DomainError("dac_transfer: defined for MsSmall/MsFeedback");
  }
  const auto op = ms_operating_point(cfg, mismatch);
  std::vector<double> transfer(static_cast<std::size_t>(cfg.synapse.code_count()));
  for (int code = 0; code < cfg.synapse.code_count(); ++code) {
    double num = active_gm_sum(op, code);
    if (cfg.topology == MsTopology::MsFeedback) num -= op.g_feedback;
    transfer[static_cast<std::size_t>(code)] = op.kappa * num / op.g_out;
  }
  return transfer;
}

// dac_transfer with the EKV interpolation bypassed (pure weak inversion):
// an infinite specific current drives every inversion coefficient to exactly
// zero, so gm = I/(eta*V_T) bit-for-bit and the transfer is exactly linear.
inline std::vector<double> dac_transfer_subthreshold(const NeuronConfig& cfg) {
  NeuronConfig pure = cfg;
  pure.device.i_spec_per_square = std::numeric_limits<double>::infinity();
  return dac_transfer(pure);
}

struct DnlInl {
  std::vector<double> dnl;  // LSB units, length 2^N - 1
  std::vector<double> inl;  // LSB units, length 2^N
  double worst_dnl = 0.0;   // max |DNL|
  double worst_inl = 0.0;   // max |INL|
  bool no_missing_code = true;  // all DNL > -1 LSB
};

// Endpoint-fit DNL/INL of a transfer curve, in LSB units.
inline DnlInl dnl_inl(const std::vector<double>& transfer) {
  if (transfer.size() < 2) {
    throw DomainError("dnl_inl: transfer needs at least two entries");
  }
  const std::size_t n = transfer.size();
  const double lsb = (transfer.back() - transfer.front()) /
                     static_cast<double>(n - 1);
  if (lsb == 0.0) {
    throw DegenerateTransfer("dnl_inl: constant transfer, LSB is zero");
  }
  DnlInl out;
  out.dnl.resize(n - 1);
  out.inl.resize(n);
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const double step = transfer[c + 1] - transfer[c];
    out.dnl[c] = (step - lsb) / lsb;
    out.worst_dnl = std::max(out.worst_dnl, std::fabs(out.dnl[c]));
    if (out.dnl[c] <= -1.0) out.no_missing_code = false;
  }
  for (std::size_t c = 0; c < n; ++c) {
    const double ideal = transfer.front() + lsb * static_cast<double>(c);
    out.inl[c] = (transfer[c] - ideal) / lsb;
    out.worst_inl = std::max(out.worst_inl, std::fabs(out.inl[c]));
  }
  return out;
}

}  // namespace neuromac
