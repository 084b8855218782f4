#pragma once

// NeuronReport: the evaluated figure-of-merit bundle for any topology, plus
// the frequency-retargeting logic shared by reports and sweeps.
//
// Retargeting semantics: solving I_unit for a bandwidth target re-biases the
// design at constant inversion coefficient (device widths scale with the
// current, the bias-tracking feedback resistor scales inversely), so every
// small-signal conductance scales linearly with I_unit, the gain is
// invariant, and energy per MAC stays exactly constant.

#include <cmath>
#include <string>

#include "neuromac/dac.hpp"
#include "neuromac/digital.hpp"
#include "neuromac/msn.hpp"

namespace neuromac {

struct NeuronReport {
  std::string label;
  std::string topology;
  double gain_db = 0.0;
  double bandwidth_hz = 0.0;
  double power_w = 0.0;
  double energy_per_mac_j = 0.0;
  double noise_psd_out = 0.0;       // V^2/Hz
  double integrated_noise_v2 = 0.0; // V^2
  double offset_3sigma_v = 0.0;     // V
  double pole_hz = 0.0;             // MsFeedback only
  double zero_hz = 0.0;             // MsFeedback only
  double i_unit_a = 0.0;            // solved unit current
};

inline double nominal_bandwidth(const NeuronConfig& cfg,
                                const CornerSet& corner = {}) {
  switch (cfg.topology) {
    case MsTopology::MsSmall:
      return msn_bandwidth(cfg) * corner.tail_current_factor;
    case MsTopology::MsFeedback:
      return feedback_bandwidth(cfg, corner);
    case MsTopology::MsLarge:
      return mslarge_bandwidth(cfg) * corner.tail_current_factor;
  }
  throw DomainError("nominal_bandwidth: unknown topology");
}

// Evaluate a mixed-signal neuron. f_target = 0 evaluates the profile at its
// nominal bias; otherwise I_unit is re-solved so the bandwidth equals
// f_target (constant-IC re-bias, exact linear scaling).
inline NeuronReport evaluate_neuron(const NeuronConfig& cfg, double f_target = 0.0,
                                    const CornerSet& corner = {}) {
  cfg.validate();
  if (f_target < 0.0) throw DomainError("evaluate_neuron: negative frequency");
  const double bw_nominal = nominal_bandwidth(cfg, corner);
  if (bw_nominal <= 0.0) {
    throw InfeasibleOperatingPoint("evaluate_neuron: zero nominal bandwidth");
  }
  const double scale = (f_target > 0.0) ? f_target / bw_nominal : 1.0;

  NeuronReport rep;
  rep.topology = to_string(cfg.topology);
  rep.bandwidth_hz = (f_target > 0.0) ? f_target : bw_nominal;

  const SynapseConfig& syn = cfg.synapse;
  const double i_total_nom = syn.total_current() * corner.tail_current_factor;
  rep.i_unit_a = syn.i_unit * corner.tail_current_factor * scale;
  // Large-signal mode draws the max-weight current; small-signal modes draw
  // the fixed (2^N-1)*I_unit regardless of weight. Numerically identical,
  // but the report's bandwidth already reflects the min-weight asymmetry
  // for MsLarge.
  rep.power_w = syn.vdd_ana * cfg.fan_in_n * i_total_nom * scale;
  rep.energy_per_mac_j = rep.power_w / rep.bandwidth_hz;

  if (cfg.topology == MsTopology::MsLarge) {
    rep.gain_db = 0.0;  // linear resistive-load multiplication
    const double c_large = static_cast<double>(cfg.fan_in_n) *
                           (std::pow(2.0, syn.precision_n) - 1.0) * syn.c_unit;
    const double r_load = 0.5 * syn.vdd_ana / (i_total_nom * scale);
    rep.noise_psd_out = 4.0 * constants::kBoltzmann * constants::kRoomTemperature * r_load;
    rep.integrated_noise_v2 =
        constants::kBoltzmann * constants::kRoomTemperature / c_large;
    rep.offset_3sigma_v =
        3.0 * std::sqrt(2.0) * vth_sigma(syn.input_geometry, cfg.device) *
        corner.vth_sigma_factor;
    return rep;
  }

  const int full_scale = syn.code_count() - 1;
  const auto op = ms_operating_point(cfg, {}, corner);
  double gain_num = active_gm_sum(op, full_scale);
  if (cfg.topology == MsTopology::MsFeedback) gain_num -= op.g_feedback;
  const double gain = op.kappa * gain_num / op.g_out;
  rep.gain_db = 20.0 * std::log10(std::fabs(gain));

  const auto noise = msn_output_noise(cfg);
  rep.noise_psd_out = noise.psd_v2_per_hz / (corner.tail_current_factor * scale);
  rep.integrated_noise_v2 = noise.integrated_v2;
  rep.offset_3sigma_v = offset_3sigma(cfg, corner);

  if (cfg.topology == MsTopology::MsFeedback) {
    const auto pz = feedback_pole_zero(cfg, corner);
    rep.pole_hz = pz.pole_hz * scale;
    rep.zero_hz = pz.zero_hz * scale;
  }
  return rep;
}

// Evaluate a digital neuron at an operating frequency.
inline NeuronReport evaluate_dig_neuron(const DigNeuronConfig& cfg, double f_target) {
  cfg.validate();
  if (f_target <= 0.0) {
    throw DomainError("evaluate_dig_neuron: frequency must be > 0");
  }
  NeuronReport rep;
  rep.topology = std::string("dig_") +
                 (cfg.multiplier_kind == MultiplierKind::WallaceTree ? "wt" : "am");
  const auto power = dig_power(cfg, f_target);  // throws when infeasible
  rep.bandwidth_hz = f_target;
  rep.power_w = power.total_w;
  rep.energy_per_mac_j = rep.power_w / rep.bandwidth_hz;
  rep.gain_db = 0.0;
  const auto q = quantization_noise(cfg.precision_n, cfg.vdd);
  rep.noise_psd_out = 0.0;
  rep.integrated_noise_v2 = q.nq_v * q.nq_v;
  rep.offset_3sigma_v = 0.0;
  return rep;
}

}  // namespace neuromac
