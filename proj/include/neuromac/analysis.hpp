#pragma once

// Energy-ratio algebra (digital vs mixed-signal at iso-frequency), the
// power/energy frequency sweeps and the process-corner table.

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "neuromac/constants.hpp"
#include "neuromac/digital.hpp"
#include "neuromac/errors.hpp"
#include "neuromac/report.hpp"

namespace neuromac {

struct RatioInputs {
  double vdd_dig = 0.4;             // V
  double vdd_ana = 1.0;             // V
  double eta = 1.3;
  double v_thermal = 0.026;         // V
  double alpha_eff = 0.3;           // effective digital activity factor
  double n_dig = 2805;              // digital transistor count
  double n_ana_regular = 255;       // regular-slice analog transistor count
  int precision_n = 8;
  double leakage_factor_l = 2.5;    // total/dynamic near the threshold freq
  double fan_in_n = 1;
  double c_unit = 0.4e-15;          // F
  double switched_cap_total = 338e-15;  // F, alpha-weighted sum

  void validate() const {
    if (vdd_dig <= 0 || vdd_ana <= 0 || eta <= 0 || v_thermal <= 0 ||
        alpha_eff <= 0 || n_dig <= 0 || n_ana_regular <= 0 ||
        precision_n <= 0 || fan_in_n <= 0 || c_unit <= 0 ||
        switched_cap_total <= 0) {
      throw DomainError("RatioInputs: all fields must be positive");
    }
    if (leakage_factor_l < 1.0) {
      throw DomainError("RatioInputs: leakage_factor_l must be >= 1");
    }
  }
};

// Supply prefactor of the iso-frequency power ratio:
// vdd_dig^2 / (vdd_ana * 2*pi * eta * V_T).  ~0.75 at the 65 nm operating
// points (0.4 V digital, 1 V analog).
inline double supply_prefactor(const RatioInputs& in) {
  in.validate();
  return in.vdd_dig * in.vdd_dig /
         (in.vdd_ana * constants::kTwoPi * in.eta * in.v_thermal);
}

// Worst-case (dynamic-only) Case-1 benefit with irregular (binary-weighted)
// slices: prefactor * sum(alpha_i*C_i) / (N * c_unit).
inline double ratio_case1_dynamic(const RatioInputs& in) {
  in.validate();
  const double c_eff = in.precision_n * in.c_unit;
  return supply_prefactor(in) * in.switched_cap_total / c_eff;
}

// Same ratio if every slice were a unit cell: C_eff = (2^N - 1) * c_unit.
inline double ratio_case1_dynamic_regular(const RatioInputs& in) {
  in.validate();
  const double c_eff = (std::pow(2.0, in.precision_n) - 1.0) * in.c_unit;
  return supply_prefactor(in) * in.switched_cap_total / c_eff;
}

struct RatioCheck {
  double value = 0.0;            // transistor-count form (the headline number)
  double capacitance_form = 0.0; // switched-cap form
  double relative_gap = 0.0;
  bool consistent = true;        // within 2%
};

// Case-1 benefit including digital leakage. Computed two ways and
// cross-checked: the transistor-count form
//   prefactor * alpha * (N_dig/N_ana_regular) * ((2^N-1)/N) * L
// and the capacitance form  prefactor * sum(alpha_i*C_i) * L / (N*c_unit).
inline RatioCheck ratio_case1_total(const RatioInputs& in) {
  in.validate();
  RatioCheck out;
  const double pf = supply_prefactor(in);
  const double irregular = (std::pow(2.0, in.precision_n) - 1.0) / in.precision_n;
  out.value = pf * in.alpha_eff * (in.n_dig / in.n_ana_regular) * irregular *
              in.leakage_factor_l;
  out.capacitance_form = ratio_case1_dynamic(in) * in.leakage_factor_l;
  out.relative_gap = std::fabs(out.value - out.capacitance_form) /
                     std::max(out.value, out.capacitance_form);
  out.consistent = out.relative_gap <= 0.02;
  return out;
}

// Case 2: n multipliers share the output node; the benefit divides by n.
inline double ratio_case2(const RatioInputs& in) {
  in.validate();
  return ratio_case1_total(in).value / in.fan_in_n;
}

// Fan-in at which the Case-2 benefit reaches unity.
inline double break_even_fan_in(const RatioInputs& in) {
  return ratio_case1_total(in).value;
}

// Leakage factor L(f) = total/dynamic of a calibrated digital profile.
inline double leakage_factor_at(const DigNeuronConfig& cfg, double f) {
  const auto p = dig_power(cfg, f);
  if (p.dynamic_w <= 0.0) {
    throw DomainError("leakage_factor_at: zero dynamic power");
  }
  return p.total_w / p.dynamic_w;
}

// ---------------------------------------------------------------------------
// Frequency sweeps
// ---------------------------------------------------------------------------

struct SweepProfile {
  std::string label;
  std::variant<NeuronConfig, DigNeuronConfig> config;
};

struct SweepPoint {
  double frequency_hz = 0.0;
  double power_w = 0.0;
  double energy_j = 0.0;
  double vdd = 0.0;       // digital supply actually used (DVFS)
  bool feasible = true;
};

struct SweepSeries {
  std::string label;
  std::vector<SweepPoint> points;
};

struct SweepResult {
  std::vector<SweepSeries> series;
  std::vector<double> grid_hz;
};

inline std::vector<double> log_grid(double f_min, double f_max, int points) {
  if (!(f_min > 0) || !(f_max > f_min) || points < 2) {
    throw DomainError("log_grid: need 0 < f_min < f_max and >= 2 points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = std::log(f_max / f_min) / (points - 1);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = f_min * std::exp(step * i);
  }
  grid.front() = f_min;
  grid.back() = f_max;
  return grid;
}

// Power and energy per MAC across a frequency grid. Mixed-signal profiles
// re-solve I_unit per point (constant-IC re-bias, power exactly linear in
// frequency); digital profiles run at nominal supply up to their ring limit
// and under DVFS above it. Unreachable digital points are marked infeasible.
inline SweepResult power_frequency_sweep(const std::vector<SweepProfile>& profiles,
                                         const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("power_frequency_sweep: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw DomainError("power_frequency_sweep: grid must increase strictly");
    }
  }
  SweepResult out;
  out.grid_hz = grid;
  for (const auto& prof : profiles) {
    SweepSeries series;
    series.label = prof.label;
    for (double f : grid) {
      SweepPoint pt;
      pt.frequency_hz = f;
      if (std::holds_alternative<NeuronConfig>(prof.config)) {
        const auto& cfg = std::get<NeuronConfig>(prof.config);
        const auto rep = evaluate_neuron(cfg, f);
        pt.power_w = rep.power_w;
        pt.energy_j = rep.energy_per_mac_j;
        pt.vdd = cfg.synapse.vdd_ana;
      } else {
        const auto& cfg = std::get<DigNeuronConfig>(prof.config);
        try {
          const auto p = dig_power_dvfs(cfg, f, &pt.vdd);
          pt.power_w = p.total_w;
          pt.energy_j = p.total_w / f;
        } catch (const InfeasibleOperatingPoint&) {
          pt.feasible = false;
        }
      }
      series.points.push_back(pt);
    }
    out.series.push_back(std::move(series));
  }
  return out;
}

// Lowest frequency at which the mixed-signal profile's power crosses the
// digital profile's (probed over the digital design's feasible range).
// Returns nullopt when one side dominates everywhere, as the small-signal
// designs do against digital.
inline std::optional<double> crossover_frequency(const NeuronConfig& ms,
                                                 const DigNeuronConfig& dig,
                                                 double f_min = 1e3,
                                                 double f_max = 1e9) {
  const double f_cap = 0.99 * dig_max_frequency_at(dig, 2.0);
  f_max = std::min(f_max, f_cap);
  if (f_max <= f_min) return std::nullopt;
  auto diff = [&](double f) {
    return evaluate_neuron(ms, f).power_w - dig_power_dvfs(dig, f).total_w;
  };
  // Scan for the first sign change (the curves can cross more than once:
  // leakage floor at low f, DVFS wall at high f), then bisect inside it.
  const auto grid = log_grid(f_min, f_max, 200);
  double prev_f = grid[0];
  double prev_d = diff(prev_f);
  if (prev_d == 0.0) return prev_f;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = diff(grid[i]);
    if (prev_d * d <= 0.0) {
      double lo = prev_f, hi = grid[i];
      for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (diff(mid) * prev_d > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return std::sqrt(lo * hi);
    }
    prev_f = grid[i];
    prev_d = d;
  }
  return std::nullopt;
}

// One NeuronReport per process corner; rows keep energy = power/bandwidth
// exactly. A corner that breaks compensation surfaces as an error for that
// row.
struct CornerRow {
  CornerSet corner;
  NeuronReport report;
  bool ok = true;
  std::string error;
};

inline std::vector<CornerRow> corner_analysis(const NeuronConfig& cfg,
                                              const std::vector<CornerSet>& corners) {
  std::vector<CornerRow> rows;
  rows.reserve(corners.size());
  for (const auto& c : corners) {
    CornerRow row;
    row.corner = c;
    try {
      row.report = evaluate_neuron(cfg, 0.0, c);
      row.report.label = c.label;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace neuromac
