#pragma once

// Minibatch SGD with momentum, softmax cross-entropy, deterministic seeded
// init/shuffle, and quantization-aware fine-tuning with a straight-through
// estimator (gradients of the quantizer treated as identity, applied to the
// full-precision masters).

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "neuromac/errors.hpp"
#include "neuromac/network/data.hpp"
#include "neuromac/network/net.hpp"
#include "neuromac/rng.hpp"

namespace neuromac {

struct Hyper {
  int epochs = 15;
  double lr = 0.02;
  int batch = 32;
  std::uint64_t seed = 1;
  double momentum = 0.9;
  double lr_decay = 0.95;
};

namespace netdetail {

struct GradBuffers {
  std::vector<std::vector<double>> gw, gb;
  std::vector<std::vector<double>> vw, vb;  // momentum

  void init(const QuantizedNetwork& net) {
    gw.resize(net.layers.size());
    gb.resize(net.layers.size());
    vw.resize(net.layers.size());
    vb.resize(net.layers.size());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
      if (!net.layers[i].has_weights()) continue;
      gw[i].assign(net.layers[i].w.size(), 0.0);
      gb[i].assign(net.layers[i].b.size(), 0.0);
      vw[i].assign(net.layers[i].w.size(), 0.0);
      vb[i].assign(net.layers[i].b.size(), 0.0);
    }
  }

  void zero_grad() {
    for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
    for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
  }
};

// Softmax cross-entropy; fills dlogits and returns the loss.
inline double softmax_ce(const std::vector<double>& logits, int label,
                         std::vector<double>* dlogits) {
  double zmax = logits[0];
  for (double z : logits) zmax = std::max(zmax, z);
  double denom = 0.0;
  for (double z : logits) denom += std::exp(z - zmax);
  dlogits->resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    (*dlogits)[i] = std::exp(logits[i] - zmax) / denom;
  }
  const double loss = -std::log((*dlogits)[static_cast<std::size_t>(label)]);
  (*dlogits)[static_cast<std::size_t>(label)] -= 1.0;
  return loss;
}

// Backward pass through the stored activations; gradients accumulate into
// buffers. Weighted layers differentiate through the quantized view (STE).
inline void backward(const QuantizedNetwork& net, const Workspace& ws,
                     std::vector<double> grad, GradBuffers* bufs) {
  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const Layer& l = net.layers[li];
    const auto& x = ws.acts[li];
    std::vector<double> gx(static_cast<std::size_t>(l.in_size), 0.0);
    switch (l.kind) {
      case LayerKind::Dense: {
        auto& gw = bufs->gw[li];
        auto& gb = bufs->gb[li];
        for (int o = 0; o < l.out_size; ++o) {
          const double go = grad[static_cast<std::size_t>(o)];
          if (go == 0.0) continue;
          gb[static_cast<std::size_t>(o)] += go;
          const double* wrow = &l.wq[static_cast<std::size_t>(o) * l.in_size];
          double* gwrow = &gw[static_cast<std::size_t>(o) * l.in_size];
          for (int i = 0; i < l.in_size; ++i) {
            gwrow[i] += go * x[static_cast<std::size_t>(i)];
            gx[static_cast<std::size_t>(i)] += go * wrow[i];
          }
        }
        break;
      }
      case LayerKind::Conv: {
        auto& gw = bufs->gw[li];
        auto& gb = bufs->gb[li];
        const int k = l.ksize;
        for (int oc = 0; oc < l.out_c; ++oc) {
          for (int oy = 0; oy < l.out_h; ++oy) {
            for (int ox = 0; ox < l.out_w; ++ox) {
              const double go =
                  grad[(static_cast<std::size_t>(oc) * l.out_h + oy) * l.out_w + ox];
              if (go == 0.0) continue;
              gb[static_cast<std::size_t>(oc)] += go;
              for (int ic = 0; ic < l.in_c; ++ic) {
                for (int ky = 0; ky < k; ++ky) {
                  const std::size_t xbase =
                      (static_cast<std::size_t>(ic) * l.in_h + (oy + ky)) * l.in_w + ox;
                  const std::size_t wbase =
                      ((static_cast<std::size_t>(oc) * l.in_c + ic) * k + ky) * k;
                  for (int kx = 0; kx < k; ++kx) {
                    gw[wbase + kx] += go * x[xbase + kx];
                    gx[xbase + kx] += go * l.wq[wbase + kx];
                  }
                }
              }
            }
          }
        }
        break;
      }
      case LayerKind::Pool: {
        for (int c = 0; c < l.in_c; ++c) {
          for (int oy = 0; oy < l.out_h; ++oy) {
            for (int ox = 0; ox < l.out_w; ++ox) {
              const double g =
                  0.25 *
                  grad[(static_cast<std::size_t>(c) * l.out_h + oy) * l.out_w + ox];
              for (int dy = 0; dy < 2; ++dy) {
                for (int dx = 0; dx < 2; ++dx) {
                  gx[(static_cast<std::size_t>(c) * l.in_h + 2 * oy + dy) * l.in_w +
                     2 * ox + dx] += g;
                }
              }
            }
          }
        }
        break;
      }
      case LayerKind::Act: {
        // Straight-through across the activation quantizer.
        for (int i = 0; i < l.in_size; ++i) {
          double d;
          if (net.activation == ActKind::Relu) {
            d = x[static_cast<std::size_t>(i)] > 0.0 ? 1.0 : 0.0;
          } else {
            const double t =
                std::tanh(x[static_cast<std::size_t>(i)] / net.act_sat);
            d = 1.0 - t * t;
          }
          gx[static_cast<std::size_t>(i)] = grad[static_cast<std::size_t>(i)] * d;
        }
        break;
      }
    }
    grad = std::move(gx);
  }
}

inline void sgd_step(QuantizedNetwork* net, GradBuffers* bufs, double lr,
                     double momentum, int batch) {
  const double inv = 1.0 / batch;
  for (std::size_t li = 0; li < net->layers.size(); ++li) {
    Layer& l = net->layers[li];
    if (!l.has_weights()) continue;
    auto& vw = bufs->vw[li];
    auto& vb = bufs->vb[li];
    for (std::size_t i = 0; i < l.w.size(); ++i) {
      vw[i] = momentum * vw[i] - lr * bufs->gw[li][i] * inv;
      l.w[i] += vw[i];
    }
    for (std::size_t i = 0; i < l.b.size(); ++i) {
      vb[i] = momentum * vb[i] - lr * bufs->gb[li][i] * inv;
      l.b[i] += vb[i];
    }
  }
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed,
                                                 int epoch) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  CounterRng rng(seed, "shuffle.epoch" + std::to_string(epoch));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.bits(i) % i;
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

// One epoch of SGD. When qat_bits < 16, weights are re-quantized per batch
// and gradients flow through the quantized view into the masters.
inline double run_epoch(QuantizedNetwork* net, const Dataset& data,
                        const Hyper& hyper, int epoch, double lr, int qat_bits,
                        GradBuffers* bufs) {
  const auto order = shuffled_indices(data.size(), hyper.seed, epoch);
  Workspace ws;
  std::vector<double> dlogits;
  double loss_sum = 0.0;
  std::size_t pos = 0;
  while (pos < order.size()) {
    const std::size_t batch_end = std::min(order.size(), pos + hyper.batch);
    const int batch_n = static_cast<int>(batch_end - pos);
    // Refresh the forward view of the masters: the quantized overlay under
    // QAT, a straight copy otherwise.
    if (qat_bits < 16) {
      *net = quantize(*net, qat_bits);
    } else {
      for (auto& l : net->layers) {
        if (l.has_weights()) {
          l.wq = l.w;
          l.bq = l.b;
        }
      }
    }
    bufs->zero_grad();
    for (; pos < batch_end; ++pos) {
      const auto& volts = data.images[order[pos]];
      forward(*net, input_to_norm(*net, volts), &ws);
      loss_sum += softmax_ce(ws.acts.back(), data.labels[order[pos]], &dlogits);
      backward(*net, ws, dlogits, bufs);
    }
    sgd_step(net, bufs, lr, hyper.momentum, batch_n);
  }
  return loss_sum / static_cast<double>(data.size());
}

}  // namespace netdetail

// Train a full-precision master network. Deterministic for a fixed seed:
// init, shuffling and accumulation order are all fixed.
inline QuantizedNetwork train(const std::string& architecture_tag,
                              const Dataset& data, const Hyper& hyper,
                              ActKind activation = ActKind::MsTanh) {
  data.validate();
  if (data.size() == 0) throw DomainError("train: empty dataset");
  QuantizedNetwork net = build_network(architecture_tag);
  net.activation = activation;
  net.swing_diff = data.swing_diff;
  init_weights(&net, hyper.seed);
  netdetail::GradBuffers bufs;
  bufs.init(net);
  double lr = hyper.lr;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double loss = netdetail::run_epoch(&net, data, hyper, epoch, lr,
                                             /*qat_bits=*/16, &bufs);
    if (!std::isfinite(loss)) {
      throw TrainingFailure("train: loss diverged", epoch);
    }
    lr *= hyper.lr_decay;
  }
  // Masters trained; refresh the quantized view.
  for (auto& l : net.layers) {
    if (l.has_weights()) {
      l.wq = l.w;
      l.bq = l.b;
    }
  }
  return net;
}

// Quantization-aware fine-tuning, stepping the precision down one bit at a
// time from min(6, current) to the target.
inline QuantizedNetwork retrain_incremental(const QuantizedNetwork& src,
                                            int bit_width, const Hyper& hyper,
                                            const Dataset& data) {
  if (bit_width < 3 || bit_width > 6) {
    throw DomainError("retrain_incremental: bit_width must lie in [3,6]");
  }
  data.validate();
  QuantizedNetwork net = src;
  netdetail::GradBuffers bufs;
  bufs.init(net);
  const int start = std::min(6, src.bit_width);
  for (int bits = start; bits >= bit_width; --bits) {
    double lr = hyper.lr;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
      const double loss =
          netdetail::run_epoch(&net, data, hyper, epoch, lr, bits, &bufs);
      if (!std::isfinite(loss)) {
        throw TrainingFailure("retrain_incremental: loss diverged", epoch);
      }
      lr *= hyper.lr_decay;
    }
  }
  return quantize(net, bit_width);
}

}  // namespace neuromac
