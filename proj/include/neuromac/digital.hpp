#pragma once

// Digital MAC neuron: synthesized cell/transistor counts, dynamic + leakage
// power, supply-limited maximum frequency and quantization noise.

#include <array>
#include <cmath>
#include <string>

#include "neuromac/constants.hpp"
#include "neuromac/errors.hpp"

namespace neuromac {

enum class MultiplierKind { WallaceTree, ArrayMultiplier };

inline const char* to_string(MultiplierKind k) {
  return k == MultiplierKind::WallaceTree ? "wallace_tree" : "array_multiplier";
}

struct DigCellCount {
  int and_gates = 0;
  int half_adders = 0;
  int full_adders = 0;
  int transistors = 0;
};

// Synthesized N-bit MAC cell counts, N in [3,8].
inline DigCellCount dig_transistor_count(int precision_n, MultiplierKind kind) {
  struct Row {
    int and_gates;
    int ha_wt, fa_wt, t_wt;
    int ha_am, fa_am, t_am;
  };
  static constexpr std::array<Row, 6> rows = {{
      {9, 2, 8, 426, 3, 3, 234},
      {16, 3, 14, 738, 4, 8, 504},
      {25, 4, 22, 1146, 5, 15, 870},
      {36, 9, 30, 1638, 6, 24, 1332},
      {49, 12, 42, 2274, 7, 35, 1890},
      {64, 14, 56, 2988, 8, 48, 2544},
  }};
  if (precision_n < 3 || precision_n > 8) {
    throw UnsupportedPrecision("dig_transistor_count: precision " +
                               std::to_string(precision_n) +
                               " outside the synthesized range [3,8]");
  }
  const Row& r = rows[static_cast<std::size_t>(precision_n - 3)];
  if (kind == MultiplierKind::WallaceTree) {
    return {r.and_gates, r.ha_wt, r.fa_wt, r.t_wt};
  }
  return {r.and_gates, r.ha_am, r.fa_am, r.t_am};
}

struct DigNeuronConfig {
  int precision_n = 8;
  MultiplierKind multiplier_kind = MultiplierKind::WallaceTree;
  double vdd = 0.4;                    // V
  double activity_factor = 0.3;        // effective alpha
  double switched_cap_total = 1.1e-12; // F, total switchable node cap (alpha=1)
  double leakage_per_transistor = 6.9361e-10;  // A at reference vdd
  double beta_p = 1.4e-4;              // A/V^2
  double beta_n = 2.2e-4;              // A/V^2
  double vth_p = 0.30;                 // V, magnitude
  double vth_n = 0.30;                 // V
  double load_cap = 3.889e-13;         // F, critical-path-scaled ring limit
  double leak_ref_vdd = 0.4;           // V, supply at which leakage is quoted

  void validate() const {
    if (precision_n < 1 || precision_n > 16) {
      throw DomainError("DigNeuronConfig: precision_n must lie in [1,16]");
    }
    if (switched_cap_total <= 0 || load_cap <= 0) {
      throw DomainError("DigNeuronConfig: capacitances must be > 0");
    }
    if (activity_factor < 0 || leakage_per_transistor < 0) {
      throw DomainError("DigNeuronConfig: negative activity or leakage");
    }
    if (beta_p <= 0 || beta_n <= 0) {
      throw DomainError("DigNeuronConfig: beta_p/beta_n must be > 0");
    }
  }
};

// Ring-limit maximum operating frequency at the config's supply.
// f = bp*(V-|VTp|)*bn*(V-VTn) / (2.2*C_L*[bp*(V-|VTp|) + bn*(V-VTn)]).
// At or below threshold the result is zero (not an error).
inline double dig_max_frequency_at(const DigNeuronConfig& c, double vdd) {
  c.validate();
  const double op = vdd - std::fabs(c.vth_p);
  const double on = vdd - c.vth_n;
  if (op <= 0.0 || on <= 0.0) return 0.0;
  const double dp = c.beta_p * op;
  const double dn = c.beta_n * on;
  return dp * dn / (2.2 * c.load_cap * (dp + dn));
}

inline double dig_max_frequency(const DigNeuronConfig& c) {
  return dig_max_frequency_at(c, c.vdd);
}

// Minimum supply that sustains frequency f (DVFS relation, inverse of the
// ring limit). Monotone bisection; throws when f is out of reach below
// vdd_cap.
inline double dig_min_vdd_for_frequency(const DigNeuronConfig& c, double f,
                                        double vdd_cap = 2.0) {
  c.validate();
  if (f <= 0.0) return c.vdd;
  if (dig_max_frequency_at(c, vdd_cap) < f) {
    throw InfeasibleOperatingPoint(
        "dig_min_vdd_for_frequency: frequency unreachable below " +
        std::to_string(vdd_cap) + " V");
  }
  double lo = std::max(std::fabs(c.vth_p), c.vth_n);
  double hi = vdd_cap;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dig_max_frequency_at(c, mid) < f ? lo : hi) = mid;
  }
  return hi;
}

struct DigPower {
  double dynamic_w = 0.0;
  double leakage_w = 0.0;
  double total_w = 0.0;
};

// Dynamic power alpha*C*V^2*f plus subthreshold leakage proportional to the
// transistor count. The frequency must not exceed the ring limit at the
// config's supply.
inline DigPower dig_power(const DigNeuronConfig& c, double f) {
  c.validate();
  if (f < 0.0) throw DomainError("dig_power: negative frequency");
  const double fmax = dig_max_frequency(c);
  if (f > fmax) {
    throw InfeasibleOperatingPoint(
        "dig_power: " + std::to_string(f) + " Hz exceeds the " +
        std::to_string(fmax) + " Hz limit at vdd=" + std::to_string(c.vdd));
  }
  DigPower out;
  out.dynamic_w = c.activity_factor * c.switched_cap_total * c.vdd * c.vdd * f;
  const int transistors =
      dig_transistor_count(c.precision_n, c.multiplier_kind).transistors;
  // Subthreshold leakage grows with the supply (DIBL); quadratic scaling
  // about the reference point where leakage_per_transistor is quoted.
  const double dibl = (c.vdd / c.leak_ref_vdd) * (c.vdd / c.leak_ref_vdd);
  out.leakage_w = transistors * c.leakage_per_transistor * dibl * c.vdd;
  out.total_w = out.dynamic_w + out.leakage_w;
  return out;
}

// Power at frequency f allowing DVFS: below the nominal-supply ring limit
// the nominal vdd is used, above it the supply is raised to the minimum
// that sustains f.
inline DigPower dig_power_dvfs(const DigNeuronConfig& c, double f,
                               double* vdd_used = nullptr) {
  const double fmax_nominal = dig_max_frequency(c);
  DigNeuronConfig eff = c;
  if (f > fmax_nominal) {
    eff.vdd = dig_min_vdd_for_frequency(c, f);
  }
  if (vdd_used) *vdd_used = eff.vdd;
  return dig_power(eff, f);
}

struct QuantizationNoise {
  double nq_v = 0.0;
  double snr_db = 0.0;
};

// Quantization noise of an N-bit code over v_range, plus the standard
// 6.02*N + 1.76 dB SNR.
inline QuantizationNoise quantization_noise(int precision_n, double v_range) {
  if (precision_n < 1) {
    throw DomainError("quantization_noise: precision must be >= 1");
  }
  if (v_range <= 0.0) {
    throw DomainError("quantization_noise: v_range must be > 0");
  }
  QuantizationNoise out;
  const double levels = std::pow(2.0, precision_n) - 1.0;
  out.nq_v = v_range / (std::sqrt(12.0) * levels);
  out.snr_db = 6.02 * precision_n + 1.76;
  return out;
}

}  // namespace neuromac
