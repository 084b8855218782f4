#pragma once

// Evaluation, NIP sweeps and the precision sweep.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "neuromac/network/net.hpp"
#include "neuromac/network/train.hpp"
#include "neuromac/parallel.hpp"

namespace neuromac {

struct EvalResult {
  double classification_error_pct = 0.0;
  std::vector<double> per_class_errors;  // percent, per true class
  int bit_width = 16;
  double nip = 0.0;
  std::uint64_t seed = 0;
  int items = 0;
};

// Argmax classification over (optionally noisy) forward passes. Items are
// independent, so evaluation parallelizes over jobs with per-item noise
// streams; the error count reduces in item order regardless of worker count.
inline EvalResult evaluate(const QuantizedNetwork& net, const Dataset& data,
                           const NoiseModel& noise = {}, std::uint64_t seed = 0,
                           int jobs = 0) {
  data.validate();
  if (data.split != Split::Test) {
    throw DomainError("evaluate: dataset split must be test");
  }
  std::vector<int> predicted(data.size());
  parallel_for(data.size(), jobs, [&](std::size_t i) {
    const auto scores = forward_noisy(net, data.images[i], noise, seed, i);
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
      if (scores[c] > scores[static_cast<std::size_t>(best)]) {
        best = static_cast<int>(c);
      }
    }
    predicted[i] = best;
  });

  EvalResult out;
  out.bit_width = net.bit_width;
  out.nip = noise.nip_override.value_or(0.0);
  out.seed = seed;
  out.items = static_cast<int>(data.size());
  std::vector<int> class_total(10, 0), class_wrong(10, 0);
  int wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int t = data.labels[i];
    ++class_total[static_cast<std::size_t>(t)];
    if (predicted[i] != t) {
      ++wrong;
      ++class_wrong[static_cast<std::size_t>(t)];
    }
  }
  out.classification_error_pct = 100.0 * wrong / static_cast<double>(data.size());
  out.per_class_errors.resize(10, 0.0);
  for (int c = 0; c < 10; ++c) {
    if (class_total[static_cast<std::size_t>(c)] > 0) {
      out.per_class_errors[static_cast<std::size_t>(c)] =
          100.0 * class_wrong[static_cast<std::size_t>(c)] /
          class_total[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

struct NipPoint {
  double nip = 0.0;
  double mean_error_pct = 0.0;
  double std_error_pct = 0.0;
};

// Classification error vs. non-ideality percentage, trials_per_point
// independent noise seeds per grid point.
inline std::vector<NipPoint> nip_sweep(const QuantizedNetwork& net,
                                       const Dataset& data,
                                       const std::vector<double>& nip_grid,
                                       int trials_per_point, std::uint64_t seed,
                                       int jobs = 0) {
  if (nip_grid.empty()) throw DomainError("nip_sweep: empty grid");
  if (trials_per_point < 1) throw DomainError("nip_sweep: trials must be >= 1");
  std::vector<NipPoint> out;
  out.reserve(nip_grid.size());
  for (std::size_t p = 0; p < nip_grid.size(); ++p) {
    NipPoint pt;
    pt.nip = nip_grid[p];
    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(trials_per_point));
    for (int t = 0; t < trials_per_point; ++t) {
      NoiseModel nm;
      if (pt.nip > 0.0) nm.nip_override = pt.nip;
      const std::uint64_t trial_seed =
          splitmix64(seed ^ splitmix64((p << 16) | static_cast<std::uint64_t>(t)));
      errors.push_back(
          evaluate(net, data, nm, trial_seed, jobs).classification_error_pct);
    }
    double sum = 0.0;
    for (double e : errors) sum += e;
    pt.mean_error_pct = sum / errors.size();
    double var = 0.0;
    for (double e : errors) {
      var += (e - pt.mean_error_pct) * (e - pt.mean_error_pct);
    }
    pt.std_error_pct = std::sqrt(var / errors.size());
    out.push_back(pt);
  }
  return out;
}

struct PrecisionPoint {
  int bits = 0;
  double error_pct = 0.0;
  bool retrained = false;
};

// Quantize (and below 7 bits, retrain incrementally) at each grid precision,
// then evaluate noiselessly.
inline std::vector<PrecisionPoint> precision_sweep(
    const QuantizedNetwork& master, const Dataset& train_data,
    const Dataset& test_data, const std::vector<int>& bits_grid,
    const Hyper& retrain_hyper, int jobs = 0) {
  if (bits_grid.empty()) throw DomainError("precision_sweep: empty grid");
  std::vector<PrecisionPoint> out;
  for (int bits : bits_grid) {
    if (bits < 2 || bits > 16) {
      throw DomainError("precision_sweep: bits outside [2,16]");
    }
    PrecisionPoint pt;
    pt.bits = bits;
    QuantizedNetwork q;
    if (bits >= 3 && bits <= 6) {
      q = retrain_incremental(master, bits, retrain_hyper, train_data);
      pt.retrained = true;
    } else {
      q = quantize(master, bits);
    }
    pt.error_pct = evaluate(q, test_data, {}, 0, jobs).classification_error_pct;
    out.push_back(pt);
  }
  return out;
}

}  // namespace neuromac
