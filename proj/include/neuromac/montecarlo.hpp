#pragma once

// Seeded Monte-Carlo campaigns over mismatch samples: offset distributions,
// DNL/INL under mismatch, and the integrated-noise-vs-power trade-off.
//
// Determinism: trial t of a campaign with seed s draws device deviations
// from counter streams keyed (s, device-id) at index t. Trials are computed
// into slot t of a preallocated vector (any worker count), and all
// reductions run sequentially in trial order afterwards.

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "neuromac/dac.hpp"
#include "neuromac/device.hpp"
#include "neuromac/msn.hpp"
#include "neuromac/parallel.hpp"
#include "neuromac/report.hpp"

namespace neuromac {

enum class McOutput { Offset, DnlInl, GainSpread };

struct McCampaignSpec {
  NeuronConfig config;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::set<McOutput> outputs{McOutput::Offset};
  double sigma_clip = 0.0;  // 0 = unclipped
  std::string label;

  void validate() const {
    config.validate();
    if (trials < 100) {
      throw DomainError("McCampaignSpec: statistical outputs need >= 100 trials");
    }
  }
};

struct McSummary {
  double mean = 0.0;
  double sigma = 0.0;
  double three_sigma = 0.0;
  std::vector<long long> histogram;  // fixed 61 bins
  double hist_lo = 0.0;              // edges frozen from the first 1000 trials
  double hist_hi = 0.0;
  double worst_dnl = 0.0;            // LSB
  double worst_inl = 0.0;            // LSB
  bool no_missing_code = true;
  int excluded_trials = 0;
  int trials = 0;
  double mean_abs_gain = 0.0;        // gain-spread output
  double sigma_gain = 0.0;
  // Offset campaigns report both referents; with |gain| near unity they
  // nearly coincide.
  double input_referred_three_sigma = 0.0;
};

inline constexpr int kHistogramBins = 61;

namespace detail {

inline void fill_scalar_summary(const std::vector<double>& values, McSummary* out) {
  const std::size_t n = values.size();
  out->trials = static_cast<int>(n);
  double sum = 0.0;
  for (double v : values) sum += v;
  out->mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - out->mean) * (v - out->mean);
  out->sigma = std::sqrt(var / static_cast<double>(n));
  out->three_sigma = 3.0 * out->sigma;

  // Histogram bins span +/-4 sigma of the first (up to) 1000 trials, then
  // stay frozen so the output schema is stable across trial counts.
  const std::size_t head = std::min<std::size_t>(n, 1000);
  double hsum = 0.0;
  for (std::size_t i = 0; i < head; ++i) hsum += values[i];
  const double hmean = hsum / static_cast<double>(head);
  double hvar = 0.0;
  for (std::size_t i = 0; i < head; ++i) {
    hvar += (values[i] - hmean) * (values[i] - hmean);
  }
  double hsigma = std::sqrt(hvar / static_cast<double>(head));
  if (hsigma == 0.0) hsigma = std::max(std::fabs(hmean), 1.0) * 1e-12;
  out->hist_lo = hmean - 4.0 * hsigma;
  out->hist_hi = hmean + 4.0 * hsigma;
  out->histogram.assign(kHistogramBins, 0);
  const double width = (out->hist_hi - out->hist_lo) / kHistogramBins;
  for (double v : values) {
    int bin = static_cast<int>(std::floor((v - out->hist_lo) / width));
    bin = std::max(0, std::min(kHistogramBins - 1, bin));
    ++out->histogram[static_cast<std::size_t>(bin)];
  }
}

}  // namespace detail

// Output-offset distribution across mismatch trials.
inline McSummary run_offset_mc(const McCampaignSpec& spec, int jobs = 0) {
  spec.validate();
  const auto geoms = device_geometries(spec.config);
  std::vector<double> offsets(static_cast<std::size_t>(spec.trials));
  parallel_for(offsets.size(), jobs, [&](std::size_t t) {
    const auto sample = sample_mismatch(geoms, spec.config.device, spec.seed, t,
                                        spec.sigma_clip);
    offsets[t] = offset_from_sample(spec.config, sample);
  });
  McSummary out;
  detail::fill_scalar_summary(offsets, &out);
  const int full_scale = spec.config.synapse.code_count() - 1;
  const double gain =
      std::fabs(spec.config.topology == MsTopology::MsFeedback
                    ? feedback_gain(spec.config, full_scale)
                    : msn_small_gain(spec.config, full_scale));
  out.input_referred_three_sigma = gain > 0.0 ? out.three_sigma / gain : 0.0;
  return out;
}

// Gain spread at full-scale weight across mismatch trials.
inline McSummary run_gain_mc(const McCampaignSpec& spec, int jobs = 0) {
  spec.validate();
  const auto geoms = device_geometries(spec.config);
  const int full_scale = spec.config.synapse.code_count() - 1;
  std::vector<double> gains(static_cast<std::size_t>(spec.trials));
  const bool feedback = spec.config.topology == MsTopology::MsFeedback;
  parallel_for(gains.size(), jobs, [&](std::size_t t) {
    const auto sample = sample_mismatch(geoms, spec.config.device, spec.seed, t,
                                        spec.sigma_clip);
    gains[t] = std::fabs(feedback ? feedback_gain(spec.config, full_scale, sample)
                                  : msn_small_gain(spec.config, full_scale, sample));
  });
  McSummary out;
  detail::fill_scalar_summary(gains, &out);
  out.mean_abs_gain = out.mean;
  out.sigma_gain = out.sigma;
  return out;
}

// Worst-case DNL/INL across mismatch trials with deviations clipped at
// sigma_clip standard deviations. sigma_clip = 0 degenerates to the
// deterministic nominal transfer. Degenerate transfers are excluded and
// counted.
inline McSummary run_dnl_mc(const McCampaignSpec& spec, double sigma_clip,
                            int jobs = 0) {
  spec.validate();
  const auto geoms = device_geometries(spec.config);
  struct TrialResult {
    double dnl = 0.0, inl = 0.0;
    bool missing = false, degenerate = false;
  };
  std::vector<TrialResult> results(static_cast<std::size_t>(spec.trials));
  parallel_for(results.size(), jobs, [&](std::size_t t) {
    MismatchSample sample;
    if (sigma_clip > 0.0) {
      sample = sample_mismatch(geoms, spec.config.device, spec.seed, t, sigma_clip);
    }
    try {
      const auto d = dnl_inl(dac_transfer(spec.config, sample));
      results[t].dnl = d.worst_dnl;
      results[t].inl = d.worst_inl;
      results[t].missing = !d.no_missing_code;
    } catch (const DegenerateTransfer&) {
      results[t].degenerate = true;
    }
  });
  McSummary out;
  out.trials = spec.trials;
  std::vector<double> dnls;
  dnls.reserve(results.size());
  for (const auto& r : results) {
    if (r.degenerate) {
      ++out.excluded_trials;
      continue;
    }
    out.worst_dnl = std::max(out.worst_dnl, r.dnl);
    out.worst_inl = std::max(out.worst_inl, r.inl);
    if (r.missing) out.no_missing_code = false;
    dnls.push_back(r.dnl);
  }
  if (!dnls.empty()) detail::fill_scalar_summary(dnls, &out);
  out.trials = spec.trials;
  out.excluded_trials = static_cast<int>(results.size() - dnls.size());
  return out;
}

struct NoisePowerPoint {
  double i_unit_a = 0.0;
  double power_w = 0.0;
  double integrated_noise_v2 = 0.0;  // thermal + flicker
  double thermal_v2 = 0.0;
  double flicker_v2 = 0.0;
  double bandwidth_hz = 0.0;
};

// Analytic flicker integral of K/f^alpha over [f_low, f_high].
inline double flicker_integral(const DeviceParams& p, double f_low, double f_high) {
  if (p.flicker_k == 0.0) return 0.0;
  if (f_low <= 0.0 || f_high <= f_low) {
    throw DomainError("flicker_integral: need 0 < f_low < f_high");
  }
  if (std::fabs(p.flicker_alpha - 1.0) < 1e-12) {
    return p.flicker_k * std::log(f_high / f_low);
  }
  const double e = 1.0 - p.flicker_alpha;
  return p.flicker_k * (std::pow(f_high, e) - std::pow(f_low, e)) / e;
}

// Integrated noise vs. power along an I_unit grid. Thermal noise follows
// the closed-form in-band integral (current-independent at fixed C_eff);
// flicker is integrated from f_low up to the bandwidth at that bias.
inline std::vector<NoisePowerPoint> noise_vs_power_curve(
    const NeuronConfig& cfg, const std::vector<double>& i_unit_grid,
    double f_low = 1.0) {
  if (i_unit_grid.empty()) throw DomainError("noise_vs_power_curve: empty grid");
  cfg.validate();
  const double bw_nom = nominal_bandwidth(cfg);
  const double i_nom = cfg.synapse.i_unit;
  std::vector<NoisePowerPoint> out;
  out.reserve(i_unit_grid.size());
  for (double i_unit : i_unit_grid) {
    if (i_unit <= 0.0) throw DomainError("noise_vs_power_curve: nonpositive I_unit");
    NeuronConfig at = cfg;
    at.synapse.i_unit = i_unit;
    at.synapse.slice_currents.clear();
    NoisePowerPoint pt;
    pt.i_unit_a = i_unit;
    pt.bandwidth_hz = bw_nom * (i_unit / i_nom);  // constant-IC re-bias
    pt.power_w = at.synapse.vdd_ana * cfg.fan_in_n * at.synapse.total_current();
    pt.thermal_v2 = msn_output_noise(at).integrated_v2;
    pt.flicker_v2 = flicker_integral(cfg.device, f_low, pt.bandwidth_hz);
    pt.integrated_noise_v2 = pt.thermal_v2 + pt.flicker_v2;
    out.push_back(pt);
  }
  return out;
}

}  // namespace neuromac
