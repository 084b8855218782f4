#pragma once

// Mixed-signal MAC neuron topologies: large-signal, small-signal and the
// resistive-feedback variant. All three are evaluated from the same
// small-signal operating point built out of the device models.
//
// Conventions used throughout:
//  - slice j (1-based) carries a binary-weighted tail current 2^(j-1)*I_unit;
//    each leg of its differential pair carries half of that.
//  - the load current I_p is half the total multiplier current.
//  - gain numerators sum the active slices of the weight code; denominator
//    conductances sum over all N slices (every slice stays biased in
//    small-signal mode, the weight only gates its input).
//  - the feedback resistor is bias-tracking: its conductance scales with
//    the tail current when a profile is re-targeted to another bandwidth
//    (constant-inversion-coefficient re-biasing).

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "neuromac/constants.hpp"
#include "neuromac/device.hpp"
#include "neuromac/errors.hpp"

namespace neuromac {

enum class MsTopology { MsLarge, MsSmall, MsFeedback };

inline const char* to_string(MsTopology t) {
  switch (t) {
    case MsTopology::MsLarge: return "ms_large";
    case MsTopology::MsSmall: return "ms_small";
    default: return "ms_feedback";
  }
}

struct SynapseConfig {
  int precision_n = 8;
  double i_unit = 100e-12;             // A
  std::vector<double> slice_currents;  // N entries; empty -> binary weighted
  double c_unit = 0.4e-15;             // F per slice on the output node
  double c_coupling = 100e-15;         // F, AC coupling per multiplier
  double c_gg = 0.1e-15;               // F, gate-to-ground per input
  double c_gd_per_slice = 0.5e-18;     // F, feedback parasitic per slice
  TransistorGeometry input_geometry{0.4e-6, 0.1e-6};
  TransistorGeometry load_geometry{1e-6, 1e-6};
  TransistorGeometry feedback_geometry{1e-6, 1e-6};
  TransistorGeometry tail_geometry{40e-6, 40e-6};  // unit cell; slice j uses 2^(j-1) cells
  double vdd_ana = 1.0;                // V
  double swing_diff = 0.4;             // V, differential input swing
  double v_early_input = 0.1690;       // V (default puts gds ~ gm/5)
  double v_early_load = 0.1690;        // V

  int code_count() const { return 1 << precision_n; }

  // Binary-weighted slice tail currents 2^(j-1)*i_unit unless overridden.
  std::vector<double> tails() const {
    if (!slice_currents.empty()) return slice_currents;
    std::vector<double> t(static_cast<std::size_t>(precision_n));
    for (int j = 1; j <= precision_n; ++j) {
      t[static_cast<std::size_t>(j - 1)] = std::ldexp(i_unit, j - 1);
    }
    return t;
  }

  double total_current() const {
    double s = 0.0;
    for (double t : tails()) s += t;
    return s;
  }

  void validate() const {
    if (precision_n < 1 || precision_n > 16) {
      throw DomainError("SynapseConfig: precision_n must lie in [1,16]");
    }
    if (i_unit < 0) throw DomainError("SynapseConfig: negative i_unit");
    if (!slice_currents.empty()) {
      if (static_cast<int>(slice_currents.size()) != precision_n) {
        throw DomainError("SynapseConfig: slice_currents must have N entries");
      }
      const double want = (std::pow(2.0, precision_n) - 1.0) * i_unit;
      double got = 0.0;
      for (double s : slice_currents) got += s;
      if (std::fabs(got - want) > 1e-9 * want + 1e-21) {
        throw DomainError("SynapseConfig: slice currents must sum to (2^N-1)*i_unit");
      }
    }
    if (c_unit <= 0 || c_coupling <= 0 || c_gg <= 0 || c_gd_per_slice <= 0) {
      throw DomainError("SynapseConfig: capacitances must be > 0");
    }
    if (swing_diff <= 0) throw DomainError("SynapseConfig: swing_diff must be > 0");
    if (v_early_input <= 0 || v_early_load <= 0) {
      throw DomainError("SynapseConfig: Early voltages must be > 0");
    }
    input_geometry.validate();
    load_geometry.validate();
    tail_geometry.validate();
  }
};

struct NeuronConfig {
  SynapseConfig synapse;
  int fan_in_n = 1;
  MsTopology topology = MsTopology::MsSmall;
  double feedback_r = 0.0;  // ohm; 0 -> solve for pole-zero cancellation
  DeviceParams device;

  void validate() const {
    device.validate();
    synapse.validate();
    if (fan_in_n < 1) throw DomainError("NeuronConfig: fan_in_n must be >= 1");
    if (topology == MsTopology::MsFeedback && feedback_r < 0.0) {
      throw DomainError("NeuronConfig: feedback_r must be > 0 (or 0 to solve)");
    }
  }
};

// Process-corner multipliers applied to the nominal operating point.
struct CornerSet {
  std::string label = "TT";
  double tail_current_factor = 1.0;
  double load_gm_factor = 1.0;
  double input_gm_factor = 1.0;
  double feedback_g_factor = 1.0;
  double vth_sigma_factor = 1.0;
};

// Small-signal operating point of one multiplier.
struct MsOperatingPoint {
  double i_total = 0.0;             // total tail current (A)
  double i_load = 0.0;              // PMOS load current (A)
  std::vector<double> gm_slice;     // differential gm per slice (S)
  double gm_input_sum = 0.0;        // sum over all N slices (S)
  double gm_load = 0.0;             // S
  double gds_load = 0.0;            // S
  double gds_input_sum = 0.0;       // S
  double g_feedback = 0.0;          // N/R (S); 0 when topology has no R
  double feedback_r = 0.0;          // ohm (resolved)
  double kappa = 1.0;               // coupling divider
  double c_eff = 0.0;               // output node cap (F)
  double c_gd_sum = 0.0;            // feedback parasitic sum (F)
  double g_out = 0.0;               // gain denominator (S)
};

// Solve Eq.-17-style pole-zero cancellation: R = 2N/(sum gm_in - gm_p),
// evaluated at full-scale weight.
inline double solve_feedback_resistance_from(double gm_input_sum, double gm_load,
                                             int precision_n) {
  const double margin = gm_input_sum - gm_load;
  if (margin <= 0.0) {
    throw DegenerateCompensation(
        "solve_feedback_resistance: input transconductance does not exceed the "
        "load; no positive feedback resistance cancels the pole");
  }
  return 2.0 * precision_n / margin;
}

// Build the operating point, with optional mismatch on the tail current
// sources (threshold shifts convert to current errors through gm_cs/I) and
// optional corner multipliers.
inline MsOperatingPoint ms_operating_point(const NeuronConfig& cfg,
                                           const MismatchSample& mismatch = {},
                                           const CornerSet& corner = {}) {
  cfg.validate();
  const SynapseConfig& syn = cfg.synapse;
  const DeviceParams& dev = cfg.device;
  MsOperatingPoint op;

  const auto tails = syn.tails();
  op.gm_slice.resize(tails.size());
  for (std::size_t j = 0; j < tails.size(); ++j) {
    double i_tail = tails[j] * corner.tail_current_factor;
    // Tail current-source mismatch: delta_I/I = g(IC_cs)*dVth/(eta*V_T).
    const std::string tail_id = "tail." + std::to_string(j + 1);
    const double dvth = mismatch.vth(tail_id);
    const double dbeta = mismatch.beta(tail_id);
    if (dvth != 0.0 || dbeta != 0.0) {
      TransistorGeometry cs = syn.tail_geometry;
      cs.width *= std::ldexp(1.0, static_cast<int>(j));  // 2^(j-1) unit cells
      const double ic_cs = inversion_coefficient(i_tail, cs, dev);
      const double rel = ekv_gm_factor(ic_cs) * dvth / (dev.eta * dev.v_thermal);
      i_tail *= (1.0 + rel + dbeta);
    }
    op.i_total += i_tail;
    op.gm_slice[j] = corner.input_gm_factor *
                     gm_ekv(0.5 * i_tail, syn.input_geometry, dev);
    op.gm_input_sum += op.gm_slice[j];
    op.gds_input_sum += 0.5 * i_tail / syn.v_early_input;
  }
  op.i_load = 0.5 * op.i_total;
  op.gm_load = corner.load_gm_factor * gm_ekv(op.i_load, syn.load_geometry, dev);
  op.gds_load = op.i_load / syn.v_early_load;
  op.kappa = syn.c_coupling / (syn.c_coupling + syn.precision_n * syn.c_gg);
  op.c_eff = static_cast<double>(cfg.fan_in_n) * syn.precision_n * syn.c_unit;
  op.c_gd_sum = syn.precision_n * syn.c_gd_per_slice;

  if (cfg.topology == MsTopology::MsFeedback) {
    double r = cfg.feedback_r;
    if (r <= 0.0) {
      r = solve_feedback_resistance_from(op.gm_input_sum, op.gm_load,
                                         syn.precision_n);
    }
    op.feedback_r = r;
    op.g_feedback = corner.feedback_g_factor * syn.precision_n / r;
    op.g_out = op.gm_load + op.gds_load + op.gm_input_sum + op.g_feedback;
  } else {
    op.g_out = op.gm_load + op.gds_load + op.gds_input_sum;
  }
  return op;
}

inline double active_gm_sum(const MsOperatingPoint& op, int weight_code) {
  double sum = 0.0;
  for (std::size_t j = 0; j < op.gm_slice.size(); ++j) {
    if (weight_code & (1 << j)) sum += op.gm_slice[j];
  }
  return sum;
}

inline void check_code(const SynapseConfig& syn, int weight_code) {
  if (weight_code < 0 || weight_code >= syn.code_count()) {
    throw DomainError("weight code " + std::to_string(weight_code) +
                      " outside [0, 2^N)");
  }
}

// Small-signal gain of the PMOS-load multiplier (no feedback):
// A = -kappa * sum_active(gm_in) / (gm_p + gds_p + sum gds_in).
inline double msn_small_gain(const NeuronConfig& cfg, int weight_code,
                             const MismatchSample& mismatch = {}) {
  if (cfg.topology != MsTopology::MsSmall) {
    throw DomainError("msn_small_gain: topology must be MsSmall");
  }
  check_code(cfg.synapse, weight_code);
  const auto op = ms_operating_point(cfg, mismatch);
  return -op.kappa * active_gm_sum(op, weight_code) / op.g_out;
}

// Gain of the resistive-feedback multiplier:
// A = -kappa * (sum_active(gm_in) - N/R) / (gm_p + gds_p + sum gm_in + N/R).
inline double feedback_gain(const NeuronConfig& cfg, int weight_code,
                            const MismatchSample& mismatch = {}) {
  if (cfg.topology != MsTopology::MsFeedback) {
    throw DomainError("feedback_gain: topology must be MsFeedback");
  }
  check_code(cfg.synapse, weight_code);
  const auto op = ms_operating_point(cfg, mismatch);
  return -op.kappa * (active_gm_sum(op, weight_code) - op.g_feedback) / op.g_out;
}

// Small-signal -3 dB bandwidth of the PMOS-load multiplier:
// BW = (2^N-1)*I_unit / (4*pi*eta*V_T*C_eff),  C_eff = fan_in*N*c_unit.
inline double msn_bandwidth(const NeuronConfig& cfg) {
  if (cfg.topology != MsTopology::MsSmall) {
    throw DomainError("msn_bandwidth: topology must be MsSmall");
  }
  cfg.validate();
  const SynapseConfig& syn = cfg.synapse;
  const double c_eff = static_cast<double>(cfg.fan_in_n) * syn.precision_n * syn.c_unit;
  const double i_total = (std::pow(2.0, syn.precision_n) - 1.0) * syn.i_unit;
  return i_total / (4.0 * constants::kPi * cfg.device.eta * cfg.device.v_thermal * c_eff);
}

struct MsNoise {
  double psd_v2_per_hz = 0.0;
  double integrated_v2 = 0.0;
};

// Output thermal noise of the multiplier. The PSD divides the input and
// load shot noise by gm_p^2; the in-band integral collapses to
// 4*q*eta*V_T/(2*pi*C_eff), independent of the bias current.
inline MsNoise msn_output_noise(const NeuronConfig& cfg) {
  if (cfg.topology == MsTopology::MsLarge) {
    throw DomainError("msn_output_noise: defined for MsSmall/MsFeedback");
  }
  cfg.validate();
  const SynapseConfig& syn = cfg.synapse;
  const DeviceParams& dev = cfg.device;
  const double i_total = (std::pow(2.0, syn.precision_n) - 1.0) * syn.i_unit;
  MsNoise out;
  out.psd_v2_per_hz = 8.0 * dev.q_charge * dev.eta * dev.eta * dev.v_thermal *
                      dev.v_thermal / i_total;
  const double c_eff = static_cast<double>(cfg.fan_in_n) * syn.precision_n * syn.c_unit;
  out.integrated_v2 =
      4.0 * dev.q_charge * dev.eta * dev.v_thermal / (constants::kTwoPi * c_eff);
  return out;
}

struct PoleZero {
  double pole_hz = 0.0;
  double zero_hz = 0.0;
};

// Dominant pole (gm_p + N/R)/sum(C_gd) and feedforward zero
// (sum gm_in - N/R)/sum(C_gd), in Hz.
inline PoleZero pole_zero_from(double gm_load, double gm_input_sum,
                               int precision_n, double feedback_r,
                               double c_gd_sum) {
  if (feedback_r <= 0.0 || c_gd_sum <= 0.0) {
    throw DomainError("pole_zero_from: R and C_gd must be > 0");
  }
  const double g_fb = precision_n / feedback_r;
  const double zero_g = gm_input_sum - g_fb;
  if (zero_g <= 0.0) {
    throw DegenerateCompensation(
        "pole_zero_from: N/R exceeds the input transconductance; the zero is "
        "nonpositive");
  }
  PoleZero pz;
  pz.pole_hz = (gm_load + g_fb) / (constants::kTwoPi * c_gd_sum);
  pz.zero_hz = zero_g / (constants::kTwoPi * c_gd_sum);
  return pz;
}

inline PoleZero feedback_pole_zero(const NeuronConfig& cfg,
                                   const CornerSet& corner = {}) {
  if (cfg.topology != MsTopology::MsFeedback) {
    throw DomainError("feedback_pole_zero: topology must be MsFeedback");
  }
  const auto op = ms_operating_point(cfg, {}, corner);
  const double zero_g = op.gm_input_sum - op.g_feedback;
  if (zero_g <= 0.0) {
    throw DegenerateCompensation(
        "feedback_pole_zero: N/R exceeds the input transconductance; "
        "the zero is nonpositive");
  }
  PoleZero pz;
  pz.pole_hz = (op.gm_load + op.g_feedback) / (constants::kTwoPi * op.c_gd_sum);
  pz.zero_hz = zero_g / (constants::kTwoPi * op.c_gd_sum);
  return pz;
}

inline double solve_feedback_resistance(const NeuronConfig& cfg) {
  if (cfg.topology != MsTopology::MsFeedback) {
    throw DomainError("solve_feedback_resistance: topology must be MsFeedback");
  }
  const auto op = ms_operating_point(cfg);
  return solve_feedback_resistance_from(op.gm_input_sum, op.gm_load,
                                        cfg.synapse.precision_n);
}

// -3 dB bandwidth of the compensated feedback stage, from
//   H(s) = A0 (1 + s/wz) / [(1 + s/wp)(1 + s/wsec)]
// with wp/wz from the pole-zero pair and wsec = G_out/sum(C_gd) the residual
// closed-loop pole. Solved numerically; exact cancellation leaves wsec.
//
// Stability note: the resistive feedback cannot oscillate in this model
// because the stage gain never exceeds unity, so there is no gain crossover
// and phase margin is not a meaningful constraint. No stability numerics
// are computed.
inline double feedback_bandwidth(const NeuronConfig& cfg,
                                 const CornerSet& corner = {}) {
  if (cfg.topology != MsTopology::MsFeedback) {
    throw DomainError("feedback_bandwidth: topology must be MsFeedback");
  }
  const auto op = ms_operating_point(cfg, {}, corner);
  const double zero_g = op.gm_input_sum - op.g_feedback;
  if (zero_g <= 0.0) {
    throw DegenerateCompensation("feedback_bandwidth: nonpositive zero");
  }
  const double wp = (op.gm_load + op.g_feedback) / op.c_gd_sum;
  const double wz = zero_g / op.c_gd_sum;
  const double wsec = op.g_out / op.c_gd_sum;

  auto mag2 = [&](double w) {
    const double num = 1.0 + (w / wz) * (w / wz);
    const double den =
        (1.0 + (w / wp) * (w / wp)) * (1.0 + (w / wsec) * (w / wsec));
    return num / den;
  };
  // |H| is 1 at DC and decays to 0; bisect for the -3 dB crossing.
  double lo = 0.0, hi = wsec;
  while (mag2(hi) > 0.5) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mag2(mid) > 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / constants::kTwoPi;
}

// Open-loop (R -> infinity) bandwidth used as the comparison baseline for
// the feedback stage: the Eq.-6 output pole over the full output cap.
inline double open_loop_bandwidth(const NeuronConfig& cfg) {
  NeuronConfig ol = cfg;
  ol.topology = MsTopology::MsSmall;
  return msn_bandwidth(ol);
}

// Per-multiplier 3-sigma output offset. Input-pair and load-pair threshold
// mismatch convert to output-referred offset through gm/G_out; slices add
// in power. AC coupling keeps offsets from chaining across stages.
inline double offset_3sigma(const NeuronConfig& cfg,
                            const CornerSet& corner = {}) {
  const auto op = ms_operating_point(cfg, {}, corner);
  const double sigma_in =
      corner.vth_sigma_factor * vth_sigma(cfg.synapse.input_geometry, cfg.device);
  const double sigma_load =
      corner.vth_sigma_factor * vth_sigma(cfg.synapse.load_geometry, cfg.device);
  double var = 0.0;
  for (double gm : op.gm_slice) {
    var += 2.0 * sigma_in * sigma_in * gm * gm;
  }
  var += 2.0 * sigma_load * sigma_load * op.gm_load * op.gm_load;
  return 3.0 * std::sqrt(var) / op.g_out;
}

// One Monte-Carlo offset realization for a drawn mismatch sample.
inline double offset_from_sample(const NeuronConfig& cfg,
                                 const MismatchSample& s) {
  const auto op = ms_operating_point(cfg, s);
  double num = 0.0;
  for (std::size_t j = 0; j < op.gm_slice.size(); ++j) {
    const std::string base = "in." + std::to_string(j + 1);
    num += op.gm_slice[j] * (s.vth(base + ".l") - s.vth(base + ".r"));
  }
  num += op.gm_load * (s.vth("load.l") - s.vth("load.r"));
  return num / op.g_out;
}

// Geometry map of every mismatch-relevant device in one multiplier:
// N input pairs, the load pair and N tail sources (slice j gets 2^(j-1)
// unit cells, so its Pelgrom area scales accordingly).
inline std::map<std::string, TransistorGeometry> device_geometries(
    const NeuronConfig& cfg) {
  std::map<std::string, TransistorGeometry> g;
  const SynapseConfig& syn = cfg.synapse;
  for (int j = 1; j <= syn.precision_n; ++j) {
    g["in." + std::to_string(j) + ".l"] = syn.input_geometry;
    g["in." + std::to_string(j) + ".r"] = syn.input_geometry;
    TransistorGeometry cs = syn.tail_geometry;
    cs.width *= std::ldexp(1.0, j - 1);
    g["tail." + std::to_string(j)] = cs;
  }
  g["load.l"] = syn.load_geometry;
  g["load.r"] = syn.load_geometry;
  return g;
}

// Large-signal mode: slices are unit cells (2^N - 1 of them), the bias
// current tracks the weight, and a resistive load keeps multiplication
// linear. Bandwidth follows the minimum nonzero weight, power the maximum.
inline double mslarge_bandwidth(const NeuronConfig& cfg) {
  if (cfg.topology != MsTopology::MsLarge) {
    throw DomainError("mslarge_bandwidth: topology must be MsLarge");
  }
  cfg.validate();
  const SynapseConfig& syn = cfg.synapse;
  const double c_large = static_cast<double>(cfg.fan_in_n) *
                         (std::pow(2.0, syn.precision_n) - 1.0) * syn.c_unit;
  // Minimum nonzero weight biases a single unit slice.
  const double gm_min = gm_subthreshold(0.5 * syn.i_unit, cfg.device);
  return gm_min / (constants::kTwoPi * c_large);
}

}  // namespace neuromac
