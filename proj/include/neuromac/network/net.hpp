#pragma once

// Layered fixed-point network with the circuit noise model attached at
// evaluation time. Master weights stay at full working precision; weight
// and activation quantization are overlays recomputed from the masters, so
// quantize() is idempotent and checkpoints only carry masters.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neuromac/errors.hpp"
#include "neuromac/msn.hpp"
#include "neuromac/report.hpp"
#include "neuromac/rng.hpp"

namespace neuromac {

enum class LayerKind { Dense, Conv, Pool, Act };
enum class ActKind { MsTanh, Relu };

struct Layer {
  LayerKind kind = LayerKind::Dense;
  // Spatial dims; dense layers use in_size/out_size only.
  int in_c = 0, in_h = 0, in_w = 0;
  int out_c = 0, out_h = 0, out_w = 0;
  int ksize = 0;
  int in_size = 0, out_size = 0;
  std::vector<double> w;   // master weights
  std::vector<double> b;   // master bias
  std::vector<double> wq;  // quantized view (== w when unquantized)
  std::vector<double> bq;  // quantized bias view
  double w_scale = 0.0;
  double b_scale = 0.0;
  double act_scale = 0.0;  // activation quantization step (Act layers)

  bool has_weights() const {
    return kind == LayerKind::Dense || kind == LayerKind::Conv;
  }
};

struct QuantizedNetwork {
  std::string architecture_tag;
  ActKind activation = ActKind::MsTanh;
  double act_sat = 1.5;    // normalized tanh saturation (2*V_sat/swing)
  double swing_diff = 0.4; // volts; converts noise volts <-> normalized units
  int bit_width = 16;      // 16 = master precision, no quant overlay
  bool quantized = false;
  std::vector<Layer> layers;

  int input_size() const { return layers.empty() ? 0 : layers.front().in_size; }
  int output_size() const { return layers.empty() ? 0 : layers.back().out_size; }
};

// --- architectures -----------------------------------------------------------

namespace netdetail {

inline Layer dense(int in, int out) {
  Layer l;
  l.kind = LayerKind::Dense;
  l.in_size = in;
  l.out_size = out;
  l.w.assign(static_cast<std::size_t>(in) * out, 0.0);
  l.b.assign(static_cast<std::size_t>(out), 0.0);
  return l;
}

inline Layer conv(int in_c, int in_h, int in_w, int out_c, int k) {
  Layer l;
  l.kind = LayerKind::Conv;
  l.in_c = in_c;
  l.in_h = in_h;
  l.in_w = in_w;
  l.out_c = out_c;
  l.ksize = k;
  l.out_h = in_h - k + 1;
  l.out_w = in_w - k + 1;
  l.in_size = in_c * in_h * in_w;
  l.out_size = out_c * l.out_h * l.out_w;
  l.w.assign(static_cast<std::size_t>(out_c) * in_c * k * k, 0.0);
  l.b.assign(static_cast<std::size_t>(out_c), 0.0);
  return l;
}

inline Layer pool2(int c, int h, int w) {
  Layer l;
  l.kind = LayerKind::Pool;
  l.in_c = c;
  l.in_h = h;
  l.in_w = w;
  l.out_c = c;
  l.out_h = h / 2;
  l.out_w = w / 2;
  l.in_size = c * h * w;
  l.out_size = c * l.out_h * l.out_w;
  return l;
}

inline Layer act(int size) {
  Layer l;
  l.kind = LayerKind::Act;
  l.in_size = size;
  l.out_size = size;
  return l;
}

}  // namespace netdetail

inline QuantizedNetwork build_network(const std::string& architecture_tag) {
  using namespace netdetail;
  QuantizedNetwork net;
  net.architecture_tag = architecture_tag;
  if (architecture_tag == "mnist_fcn") {
    net.layers = {dense(784, 100), act(100), dense(100, 50), act(50), dense(50, 10)};
  } else if (architecture_tag == "mnist_cnn_small") {
    net.layers = {conv(1, 28, 28, 8, 5),  act(8 * 24 * 24), pool2(8, 24, 24),
                  conv(8, 12, 12, 16, 5), act(16 * 8 * 8),  pool2(16, 8, 8),
                  dense(16 * 4 * 4, 64),  act(64),          dense(64, 10)};
  } else if (architecture_tag == "cifar_cnn_small") {
    net.layers = {conv(3, 32, 32, 12, 5),  act(12 * 28 * 28), pool2(12, 28, 28),
                  conv(12, 14, 14, 24, 5), act(24 * 10 * 10), pool2(24, 10, 10),
                  dense(24 * 5 * 5, 96),   act(96),           dense(96, 10)};
  } else {
    throw ConfigError("unknown architecture_tag '" + architecture_tag + "'");
  }
  return net;
}

inline void init_weights(QuantizedNetwork* net, std::uint64_t seed) {
  for (std::size_t li = 0; li < net->layers.size(); ++li) {
    Layer& l = net->layers[li];
    if (!l.has_weights()) continue;
    const int fan_in = l.kind == LayerKind::Dense ? l.in_size
                                                  : l.in_c * l.ksize * l.ksize;
    const double scale = std::sqrt(2.0 / fan_in);
    CounterRng rng(seed, "init.layer" + std::to_string(li));
    for (std::size_t i = 0; i < l.w.size(); ++i) {
      l.w[i] = scale * rng.gaussian(i);
    }
    for (auto& bb : l.b) bb = 0.0;
    l.wq = l.w;
    l.bq = l.b;
  }
}

// --- quantization ------------------------------------------------------------

inline double quant_levels(int bits) { return std::pow(2.0, bits - 1) - 1.0; }

// Symmetric uniform quantization of the weight masters; activation steps
// are derived from the activation bound. Always recomputed from the master
// weights, hence idempotent.
inline QuantizedNetwork quantize(const QuantizedNetwork& src, int bit_width) {
  if (bit_width < 2 || bit_width > 16) {
    throw DomainError("quantize: bit_width must lie in [2,16]");
  }
  QuantizedNetwork net = src;
  net.bit_width = bit_width;
  net.quantized = bit_width < 16;
  const double levels = quant_levels(bit_width);
  auto quantize_tensor = [&](const std::vector<double>& src,
                             std::vector<double>* dst, double* scale) {
    double maxabs = 0.0;
    for (double v : src) maxabs = std::max(maxabs, std::fabs(v));
    *scale = maxabs > 0.0 ? maxabs / levels : 1.0;
    dst->resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      double code = std::nearbyint(src[i] / *scale);
      code = std::max(-levels - 1.0, std::min(levels, code));
      (*dst)[i] = code * *scale;
    }
  };
  for (Layer& l : net.layers) {
    if (l.has_weights()) {
      if (!net.quantized) {
        l.wq = l.w;
        l.bq = l.b;
        double maxabs = 0.0;
        for (double w : l.w) maxabs = std::max(maxabs, std::fabs(w));
        l.w_scale = maxabs > 0.0 ? maxabs / levels : 1.0;
      } else {
        quantize_tensor(l.w, &l.wq, &l.w_scale);
        quantize_tensor(l.b, &l.bq, &l.b_scale);
      }
    } else if (l.kind == LayerKind::Act) {
      l.act_scale = net.quantized ? net.act_sat / levels : 0.0;
    }
  }
  return net;
}

// --- noise model ---------------------------------------------------------------

// Eq.-of-operation noise attachment: each MAC perturbs its synapse input by
// sqrt(A)*g + Delta_k (volts), with g a fresh standard Gaussian per MAC and
// Delta_k the per-synapse DC offset. nip_override instead perturbs by
// nip/100 * |v| with the sign of g.
struct NoiseModel {
  double integrated_noise_a = 0.0;  // V^2
  double offset_sigma_v = 0.0;      // per-synapse offset sigma (generator spec)
  double uniform_offset_v = 0.0;    // constant Delta applied to every synapse
  std::uint64_t offset_seed = 0;
  std::optional<double> nip_override;  // percent
  // Literal reading of the noisy-MAC formula: add sqrt(A) as a deterministic
  // term instead of a Gaussian with std sqrt(A).
  bool deterministic_sqrt_a = false;

  bool zero() const {
    return integrated_noise_a == 0.0 && offset_sigma_v == 0.0 &&
           uniform_offset_v == 0.0 && !nip_override;
  }

  void validate() const {
    if (integrated_noise_a < 0.0) {
      throw DomainError("NoiseModel: integrated_noise_a must be >= 0");
    }
    if (nip_override && (*nip_override < 0.0 || *nip_override > 100.0)) {
      throw DomainError("NoiseModel: nip_override must lie in [0,100]");
    }
  }

  // Circuit-tied construction: A from the profile's integrated output noise,
  // per-synapse offsets from its mismatch model (drawn once per network
  // instantiation through offset_seed).
  static NoiseModel from_profile(const NeuronConfig& cfg, std::uint64_t seed) {
    NoiseModel m;
    m.integrated_noise_a = msn_output_noise(cfg).integrated_v2;
    m.offset_sigma_v = offset_3sigma(cfg) / 3.0;
    m.offset_seed = seed;
    return m;
  }
};

inline double nip_percent(double sqrt_a_plus_delta_v, double swing_diff) {
  if (swing_diff <= 0.0) throw DomainError("nip_percent: swing must be > 0");
  return 100.0 * sqrt_a_plus_delta_v / swing_diff;
}

namespace netdetail {

struct NoiseCtx {
  const NoiseModel* model = nullptr;
  std::uint64_t eval_seed = 0;
  std::uint64_t item = 0;
  double volts_to_norm = 5.0;  // 2 / swing_diff
};

// Per-MAC perturbation in normalized units. layer_key separates streams per
// layer; mac_index must be unique within (item, layer); syn_index identifies
// the synapse for the fixed offset component.
inline double mac_delta(const NoiseCtx& ctx, const CounterRng& gauss_stream,
                        std::uint64_t mac_index, std::uint64_t syn_index,
                        const CounterRng& offset_stream, double v_norm) {
  const NoiseModel& m = *ctx.model;
  if (m.nip_override) {
    const std::uint64_t bits = gauss_stream.bits(mac_index);
    const double sign = (bits & 1u) ? 1.0 : -1.0;
    return (*m.nip_override / 100.0) * std::fabs(v_norm) * sign;
  }
  double delta_v = m.uniform_offset_v;
  if (m.integrated_noise_a > 0.0) {
    delta_v += m.deterministic_sqrt_a
                   ? std::sqrt(m.integrated_noise_a)
                   : std::sqrt(m.integrated_noise_a) * gauss_stream.gaussian(mac_index);
  }
  if (m.offset_sigma_v > 0.0) {
    delta_v += m.offset_sigma_v * offset_stream.gaussian(syn_index);
  }
  return delta_v * ctx.volts_to_norm;
}

}  // namespace netdetail

// --- forward -----------------------------------------------------------------

struct Workspace {
  std::vector<std::vector<double>> acts;  // acts[0] = input, acts[i+1] = layer i out
};

inline double apply_act(const QuantizedNetwork& net, double x) {
  if (net.activation == ActKind::Relu) return x > 0.0 ? x : 0.0;
  return net.act_sat * std::tanh(x / net.act_sat);
}

inline double fake_quant_act(const Layer& l, double y) {
  if (l.act_scale <= 0.0) return y;
  return std::nearbyint(y / l.act_scale) * l.act_scale;
}

// Forward pass; when noise is non-null every weighted MAC perturbs its input.
inline void forward(const QuantizedNetwork& net, const std::vector<double>& input_norm,
                    Workspace* ws, const netdetail::NoiseCtx* noise = nullptr) {
  if (static_cast<int>(input_norm.size()) != net.input_size()) {
    throw DomainError("forward: input size mismatch");
  }
  ws->acts.assign(net.layers.size() + 1, {});
  ws->acts[0] = input_norm;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const Layer& l = net.layers[li];
    const auto& x = ws->acts[li];
    auto& y = ws->acts[li + 1];
    y.assign(static_cast<std::size_t>(l.out_size), 0.0);
    const bool noisy = noise && !noise->model->zero() && l.has_weights();
    CounterRng gauss_stream(noise ? noise->eval_seed : 0,
                            "noise.layer" + std::to_string(li));
    CounterRng offset_stream(noise ? noise->model->offset_seed : 0,
                             "offset.layer" + std::to_string(li));
    const std::uint64_t mac_base =
        noise ? noise->item * static_cast<std::uint64_t>(l.in_size) *
                    static_cast<std::uint64_t>(l.out_size)
              : 0;

    switch (l.kind) {
      case LayerKind::Dense: {
        for (int o = 0; o < l.out_size; ++o) {
          double sum = l.bq[static_cast<std::size_t>(o)];
          const double* wrow = &l.wq[static_cast<std::size_t>(o) * l.in_size];
          if (!noisy) {
            for (int i = 0; i < l.in_size; ++i) sum += wrow[i] * x[static_cast<std::size_t>(i)];
          } else {
            for (int i = 0; i < l.in_size; ++i) {
              const std::uint64_t syn = static_cast<std::uint64_t>(o) * l.in_size + i;
              const double v = x[static_cast<std::size_t>(i)];
              const double d = netdetail::mac_delta(*noise, gauss_stream,
                                                    mac_base + syn, syn,
                                                    offset_stream, v);
              sum += wrow[i] * (v + d);
            }
          }
          y[static_cast<std::size_t>(o)] = sum;
        }
        break;
      }
      case LayerKind::Conv: {
        const int k = l.ksize;
        std::uint64_t mac = mac_base;
        for (int oc = 0; oc < l.out_c; ++oc) {
          for (int oy = 0; oy < l.out_h; ++oy) {
            for (int ox = 0; ox < l.out_w; ++ox) {
              double sum = l.bq[static_cast<std::size_t>(oc)];
              for (int ic = 0; ic < l.in_c; ++ic) {
                for (int ky = 0; ky < k; ++ky) {
                  const double* xrow =
                      &x[(static_cast<std::size_t>(ic) * l.in_h + (oy + ky)) * l.in_w + ox];
                  const double* wrow =
                      &l.wq[((static_cast<std::size_t>(oc) * l.in_c + ic) * k + ky) * k];
                  if (!noisy) {
                    for (int kx = 0; kx < k; ++kx) sum += wrow[kx] * xrow[kx];
                  } else {
                    for (int kx = 0; kx < k; ++kx) {
                      const std::uint64_t syn =
                          ((static_cast<std::uint64_t>(oc) * l.in_c + ic) * k + ky) * k + kx;
                      const double v = xrow[kx];
                      const double d = netdetail::mac_delta(*noise, gauss_stream,
                                                            mac++, syn,
                                                            offset_stream, v);
                      sum += wrow[kx] * (v + d);
                    }
                  }
                }
              }
              y[(static_cast<std::size_t>(oc) * l.out_h + oy) * l.out_w + ox] = sum;
            }
          }
        }
        break;
      }
      case LayerKind::Pool: {
        for (int c = 0; c < l.in_c; ++c) {
          for (int oy = 0; oy < l.out_h; ++oy) {
            for (int ox = 0; ox < l.out_w; ++ox) {
              double sum = 0.0;
              for (int dy = 0; dy < 2; ++dy) {
                for (int dx = 0; dx < 2; ++dx) {
                  sum += x[(static_cast<std::size_t>(c) * l.in_h + 2 * oy + dy) * l.in_w +
                           2 * ox + dx];
                }
              }
              y[(static_cast<std::size_t>(c) * l.out_h + oy) * l.out_w + ox] = 0.25 * sum;
            }
          }
        }
        break;
      }
      case LayerKind::Act: {
        for (int i = 0; i < l.in_size; ++i) {
          y[static_cast<std::size_t>(i)] =
              fake_quant_act(l, apply_act(net, x[static_cast<std::size_t>(i)]));
        }
        break;
      }
    }
  }
}

inline std::vector<double> input_to_norm(const QuantizedNetwork& net,
                                         const std::vector<double>& volts) {
  std::vector<double> norm(volts.size());
  const double k = 2.0 / net.swing_diff;
  for (std::size_t i = 0; i < volts.size(); ++i) norm[i] = volts[i] * k;
  return norm;
}

// Class scores (logits) for one item, optionally with the noise model.
inline std::vector<double> forward_noisy(const QuantizedNetwork& net,
                                         const std::vector<double>& input_volts,
                                         const NoiseModel& noise,
                                         std::uint64_t seed,
                                         std::uint64_t item_index = 0) {
  noise.validate();
  Workspace ws;
  const auto x = input_to_norm(net, input_volts);
  if (noise.zero()) {
    forward(net, x, &ws, nullptr);
  } else {
    netdetail::NoiseCtx ctx;
    ctx.model = &noise;
    ctx.eval_seed = seed;
    ctx.item = item_index;
    ctx.volts_to_norm = 2.0 / net.swing_diff;
    forward(net, x, &ws, &ctx);
  }
  return ws.acts.back();
}

}  // namespace neuromac
