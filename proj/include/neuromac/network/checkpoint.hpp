#pragma once

// Versioned model container: magic "MSNN", little-endian fixed-width header
// fields, per-layer shape table, then the float64 master weight payload.
// Quantization overlays are recomputed on load from (master, bit_width).

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "neuromac/errors.hpp"
#include "neuromac/network/net.hpp"

namespace neuromac {

namespace netdetail {

inline void put_u32(std::string* out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out->append(b, 4);
}

inline void put_u64(std::string* out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out->append(b, 8);
}

inline void put_f64(std::string* out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(out, v);
}

struct Reader {
  const std::vector<std::uint8_t>& buf;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > buf.size()) {
      throw FormatError("truncated checkpoint", static_cast<long long>(buf.size()));
    }
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() {
    const std::uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(&buf[pos]), n);
    pos += n;
    return s;
  }
};

}  // namespace netdetail

inline void save_checkpoint(const QuantizedNetwork& net, const std::string& path) {
  using namespace netdetail;
  std::string out;
  out.append("MSNN", 4);
  put_u32(&out, 1);  // version
  put_u32(&out, static_cast<std::uint32_t>(net.architecture_tag.size()));
  out.append(net.architecture_tag);
  put_u32(&out, static_cast<std::uint32_t>(net.bit_width));
  put_u32(&out, net.activation == ActKind::Relu ? 1u : 0u);
  put_f64(&out, net.act_sat);
  put_f64(&out, net.swing_diff);
  put_u32(&out, static_cast<std::uint32_t>(net.layers.size()));
  for (const Layer& l : net.layers) {
    put_u32(&out, static_cast<std::uint32_t>(l.kind));
    for (int v : {l.in_c, l.in_h, l.in_w, l.out_c, l.out_h, l.out_w, l.ksize,
                  l.in_size, l.out_size}) {
      put_u32(&out, static_cast<std::uint32_t>(v));
    }
    put_u64(&out, l.w.size());
    put_u64(&out, l.b.size());
  }
  for (const Layer& l : net.layers) {
    for (double w : l.w) put_f64(&out, w);
    for (double b : l.b) put_f64(&out, b);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write checkpoint: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

inline QuantizedNetwork load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open checkpoint: " + path);
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(f)),
                                std::istreambuf_iterator<char>());
  netdetail::Reader r{buf};
  if (r.str(4) != "MSNN") throw FormatError("bad checkpoint magic", 0);
  const std::uint32_t version = r.u32();
  if (version != 1) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version), 4);
  }
  QuantizedNetwork net;
  const std::uint32_t tag_len = r.u32();
  net.architecture_tag = r.str(tag_len);
  const int bit_width = static_cast<int>(r.u32());
  net.activation = r.u32() == 1 ? ActKind::Relu : ActKind::MsTanh;
  net.act_sat = r.f64();
  net.swing_diff = r.f64();
  const std::uint32_t n_layers = r.u32();
  net.layers.resize(n_layers);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts(n_layers);
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    Layer& l = net.layers[i];
    l.kind = static_cast<LayerKind>(r.u32());
    l.in_c = static_cast<int>(r.u32());
    l.in_h = static_cast<int>(r.u32());
    l.in_w = static_cast<int>(r.u32());
    l.out_c = static_cast<int>(r.u32());
    l.out_h = static_cast<int>(r.u32());
    l.out_w = static_cast<int>(r.u32());
    l.ksize = static_cast<int>(r.u32());
    l.in_size = static_cast<int>(r.u32());
    l.out_size = static_cast<int>(r.u32());
    counts[i] = {r.u64(), r.u64()};
  }
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    Layer& l = net.layers[i];
    l.w.resize(counts[i].first);
    l.b.resize(counts[i].second);
    for (auto& w : l.w) w = r.f64();
    for (auto& b : l.b) b = r.f64();
    l.wq = l.w;
    l.bq = l.b;
  }
  return bit_width < 16 ? quantize(net, bit_width) : net;
}

}  // namespace neuromac
