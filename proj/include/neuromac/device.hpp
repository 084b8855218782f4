#pragma once

// Technology- and transistor-level behavioral models shared by all neuron
// topologies: subthreshold / EKV transconductance, noise power spectral
// densities and Pelgrom-style mismatch statistics.

#include <cmath>
#include <map>
#include <string>

#include "neuromac/constants.hpp"
#include "neuromac/errors.hpp"
#include "neuromac/rng.hpp"

namespace neuromac {

struct DeviceParams {
  double eta = 1.3;             // subthreshold slope factor
  double v_thermal = 0.026;     // V
  double q_charge = constants::kElectronCharge;  // C
  double a_vth = 4.0e-9;        // V*m  (4 mV*um Pelgrom coefficient)
  double s_vth = 0.0;           // V/m  (distance proportionality)
  double flicker_k = 0.0;       // V^2
  double flicker_alpha = 1.0;
  double i_spec_per_square = 6.0e-7;  // A per unit W/L

  void validate() const {
    if (eta < 1.0) throw DomainError("DeviceParams: eta must be >= 1");
    if (v_thermal <= 0.0) throw DomainError("DeviceParams: v_thermal must be > 0");
    if (!(flicker_alpha > 0.5 && flicker_alpha <= 1.5)) {
      throw DomainError("DeviceParams: flicker_alpha must lie in (0.5, 1.5]");
    }
    if (q_charge < 0 || a_vth < 0 || s_vth < 0 || flicker_k < 0 ||
        i_spec_per_square < 0) {
      throw DomainError("DeviceParams: coefficients must be nonnegative");
    }
  }
};

struct TransistorGeometry {
  double width = 1e-6;        // m
  double length = 1e-6;       // m
  double distance_dx = 0.0;   // m, center-to-center spacing

  void validate() const {
    if (width <= 0.0 || length <= 0.0) {
      throw DomainError("TransistorGeometry: width and length must be > 0");
    }
    if (distance_dx < 0.0) {
      throw DomainError("TransistorGeometry: distance_dx must be >= 0");
    }
  }
};

// One Monte-Carlo draw of per-device deviations. An empty map is the
// nominal circuit. Threshold mismatch dominates (the beta map exists for
// completeness and defaults to empty).
struct MismatchSample {
  std::map<std::string, double> delta_vth;   // device-id -> V
  std::map<std::string, double> delta_beta;  // device-id -> relative

  double vth(const std::string& id) const {
    auto it = delta_vth.find(id);
    return it == delta_vth.end() ? 0.0 : it->second;
  }
  double beta(const std::string& id) const {
    auto it = delta_beta.find(id);
    return it == delta_beta.end() ? 0.0 : it->second;
  }
};

// gm = I / (eta * V_T), exact in weak inversion.
inline double gm_subthreshold(double i_bias, const DeviceParams& p) {
  if (i_bias < 0.0) throw DomainError("gm_subthreshold: negative bias current");
  return i_bias / (p.eta * p.v_thermal);
}

// Inversion coefficient of a device: IC = I / (Ispec * W/L).
inline double inversion_coefficient(double i_bias, const TransistorGeometry& g,
                                    const DeviceParams& p) {
  g.validate();
  if (i_bias < 0.0) throw DomainError("inversion_coefficient: negative current");
  const double shape = g.width / g.length;
  return i_bias / (p.i_spec_per_square * shape);
}

// EKV-style interpolation g(IC) = 1/(0.5 + sqrt(0.25 + IC)); g(0) = 1,
// monotone decreasing, ~1/sqrt(IC) in strong inversion.
inline double ekv_gm_factor(double ic) {
  if (ic < 0.0) throw DomainError("ekv_gm_factor: negative inversion coefficient");
  return 1.0 / (0.5 + std::sqrt(0.25 + ic));
}

// Transconductance across inversion levels:
// gm = I/(eta*V_T) * g(IC). Reduces to gm_subthreshold as IC -> 0.
inline double gm_ekv(double i_bias, const TransistorGeometry& g,
                     const DeviceParams& p) {
  if (i_bias < 0.0) throw DomainError("gm_ekv: negative bias current");
  return gm_subthreshold(i_bias, p) * ekv_gm_factor(inversion_coefficient(i_bias, g, p));
}

// Shot-limited channel noise of a subthreshold device: 2*q*I  (A^2/Hz).
inline double thermal_noise_current_psd(double i_bias, const DeviceParams& p) {
  if (i_bias < 0.0) {
    throw DomainError("thermal_noise_current_psd: negative bias current");
  }
  return 2.0 * p.q_charge * i_bias;
}

// Flicker voltage noise K / f^alpha  (V^2/Hz).
inline double flicker_noise_psd(double f, const DeviceParams& p) {
  if (f <= 0.0) throw DomainError("flicker_noise_psd: frequency must be > 0");
  return p.flicker_k / std::pow(f, p.flicker_alpha);
}

// Pelgrom threshold-mismatch sigma: A_VTH/sqrt(W*L) + S_VTH*D_x  (V).
inline double vth_sigma(const TransistorGeometry& g, const DeviceParams& p) {
  g.validate();
  return p.a_vth / std::sqrt(g.width * g.length) + p.s_vth * g.distance_dx;
}

// Draw an independent Gaussian threshold deviation for every device.
// Deterministic for a fixed seed: each device gets its own counter-based
// stream keyed by (seed, fnv1a(device-id)) and evaluated at the trial
// index, so Monte-Carlo campaigns can partition trials across workers.
// clip_sigma > 0 truncates each draw at +/- clip_sigma standard deviations.
inline MismatchSample sample_mismatch(
    const std::map<std::string, TransistorGeometry>& geometries,
    const DeviceParams& params, std::uint64_t seed, std::uint64_t trial = 0,
    double clip_sigma = 0.0) {
  if (geometries.empty()) {
    throw DomainError("sample_mismatch: empty geometry map");
  }
  MismatchSample sample;
  for (const auto& [id, geom] : geometries) {
    const double sigma = vth_sigma(geom, params);
    if (sigma == 0.0) continue;  // nominal device
    CounterRng rng(seed, id);
    double g = rng.gaussian(trial);
    if (clip_sigma > 0.0) {
      g = std::max(-clip_sigma, std::min(clip_sigma, g));
    }
    sample.delta_vth[id] = sigma * g;
  }
  return sample;
}

}  // namespace neuromac
