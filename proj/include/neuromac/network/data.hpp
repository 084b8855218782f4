#pragma once

// Dataset container plus the binary loaders (IDX images/labels, CIFAR-10
// batches) and a deterministic synthetic-digit corpus generator that writes
// the same IDX format, so the full train/eval pipeline runs end to end
// without external downloads.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "neuromac/errors.hpp"
#include "neuromac/rng.hpp"

namespace neuromac {

enum class Split { Train, Test };

// Images are stored as differential input voltages: byte p maps linearly to
// (p/255 - 1/2) * swing_diff, so byte 255 sits at +swing/2 and byte 0 at
// -swing/2.
struct Dataset {
  int height = 0;
  int width = 0;
  int channels = 1;
  double swing_diff = 0.4;
  Split split = Split::Train;
  std::vector<std::vector<double>> images;  // volts
  std::vector<int> labels;

  std::size_t size() const { return images.size(); }

  void validate() const {
    if (images.size() != labels.size()) {
      throw DomainError("Dataset: image/label count mismatch");
    }
    for (int l : labels) {
      if (l < 0 || l >= 10) throw DomainError("Dataset: label outside [0,10)");
    }
  }
};

namespace detail {

inline std::vector<std::uint8_t> read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open data file: " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline std::uint32_t read_be32(const std::vector<std::uint8_t>& buf,
                               std::size_t offset) {
  if (offset + 4 > buf.size()) {
    throw FormatError("unexpected end of file reading 32-bit field",
                      static_cast<long long>(buf.size()));
  }
  return (static_cast<std::uint32_t>(buf[offset]) << 24) |
         (static_cast<std::uint32_t>(buf[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(buf[offset + 2]) << 8) |
         static_cast<std::uint32_t>(buf[offset + 3]);
}

inline double byte_to_volts(std::uint8_t p, double swing) {
  return (static_cast<double>(p) / 255.0 - 0.5) * swing;
}

}  // namespace detail

// IDX image + label pair (magic 0x00000803 / 0x00000801, big-endian dims).
inline Dataset load_mnist(const std::string& image_path,
                          const std::string& label_path, double swing_diff = 0.4,
                          Split split = Split::Test) {
  const auto img = detail::read_binary(image_path);
  const auto lab = detail::read_binary(label_path);

  if (detail::read_be32(img, 0) != 0x00000803u) {
    throw FormatError("bad IDX image magic in " + image_path, 0);
  }
  const std::uint32_t count = detail::read_be32(img, 4);
  const std::uint32_t rows = detail::read_be32(img, 8);
  const std::uint32_t cols = detail::read_be32(img, 12);
  const std::size_t need = 16 + static_cast<std::size_t>(count) * rows * cols;
  if (img.size() < need) {
    throw FormatError("truncated IDX image file " + image_path,
                      static_cast<long long>(img.size()));
  }

  if (detail::read_be32(lab, 0) != 0x00000801u) {
    throw FormatError("bad IDX label magic in " + label_path, 0);
  }
  const std::uint32_t lab_count = detail::read_be32(lab, 4);
  if (lab_count != count) {
    throw FormatError("label count " + std::to_string(lab_count) +
                          " does not match image count " + std::to_string(count),
                      4);
  }
  if (lab.size() < 8 + static_cast<std::size_t>(count)) {
    throw FormatError("truncated IDX label file " + label_path,
                      static_cast<long long>(lab.size()));
  }

  Dataset out;
  out.height = static_cast<int>(rows);
  out.width = static_cast<int>(cols);
  out.channels = 1;
  out.swing_diff = swing_diff;
  out.split = split;
  out.images.resize(count);
  out.labels.resize(count);
  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  for (std::uint32_t i = 0; i < count; ++i) {
    auto& image = out.images[i];
    image.resize(pixels);
    const std::size_t base = 16 + static_cast<std::size_t>(i) * pixels;
    for (std::size_t p = 0; p < pixels; ++p) {
      image[p] = detail::byte_to_volts(img[base + p], swing_diff);
    }
    out.labels[i] = lab[8 + i];
  }
  out.validate();
  return out;
}

// CIFAR-10 binary batch: records of 1 label byte + 3072 pixel bytes
// (3 channel planes of 32x32).
inline Dataset load_cifar10(const std::string& path, double swing_diff = 0.4,
                            Split split = Split::Test) {
  const auto buf = detail::read_binary(path);
  constexpr std::size_t kRecord = 3073;
  if (buf.empty() || buf.size() % kRecord != 0) {
    throw FormatError("CIFAR-10 batch size is not a multiple of 3073 in " + path,
                      static_cast<long long>(buf.size()));
  }
  const std::size_t count = buf.size() / kRecord;
  Dataset out;
  out.height = 32;
  out.width = 32;
  out.channels = 3;
  out.swing_diff = swing_diff;
  out.split = split;
  out.images.resize(count);
  out.labels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t base = i * kRecord;
    const int label = buf[base];
    if (label > 9) {
      throw FormatError("CIFAR-10 label byte out of range",
                        static_cast<long long>(base));
    }
    out.labels[i] = label;
    auto& image = out.images[i];
    image.resize(3072);
    for (std::size_t p = 0; p < 3072; ++p) {
      image[p] = detail::byte_to_volts(buf[base + 1 + p], swing_diff);
    }
  }
  out.validate();
  return out;
}

// --- IDX writers -------------------------------------------------------------

namespace detail {

inline void write_be32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

}  // namespace detail

inline void write_idx_images(const std::string& path,
                             const std::vector<std::vector<std::uint8_t>>& images,
                             int rows, int cols) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  detail::write_be32(out, 0x00000803u);
  detail::write_be32(out, static_cast<std::uint32_t>(images.size()));
  detail::write_be32(out, static_cast<std::uint32_t>(rows));
  detail::write_be32(out, static_cast<std::uint32_t>(cols));
  for (const auto& img : images) {
    out.write(reinterpret_cast<const char*>(img.data()),
              static_cast<std::streamsize>(img.size()));
  }
}

inline void write_idx_labels(const std::string& path,
                             const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  detail::write_be32(out, 0x00000801u);
  detail::write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

// --- Synthetic digit corpus --------------------------------------------------

namespace detail {

// 7x5 digit glyphs.
inline const char* digit_glyph(int d) {
  static const char* glyphs[10] = {
      "01110"
      "10001"
      "10011"
      "10101"
      "11001"
      "10001"
      "01110",
      "00100"
      "01100"
      "00100"
      "00100"
      "00100"
      "00100"
      "01110",
      "01110"
      "10001"
      "00001"
      "00110"
      "01000"
      "10000"
      "11111",
      "11110"
      "00001"
      "00001"
      "01110"
      "00001"
      "00001"
      "11110",
      "00010"
      "00110"
      "01010"
      "10010"
      "11111"
      "00010"
      "00010",
      "11111"
      "10000"
      "11110"
      "00001"
      "00001"
      "10001"
      "01110",
      "00110"
      "01000"
      "10000"
      "11110"
      "10001"
      "10001"
      "01110",
      "11111"
      "00001"
      "00010"
      "00100"
      "01000"
      "01000"
      "01000",
      "01110"
      "10001"
      "10001"
      "01110"
      "10001"
      "10001"
      "01110",
      "01110"
      "10001"
      "10001"
      "01111"
      "00001"
      "00010"
      "01100"};
  return glyphs[d];
}

// Bilinear sample of a glyph treated as a [0,1]^2 field.
inline double glyph_sample(const char* glyph, double u, double v) {
  if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) return 0.0;
  const double x = u * 5.0 - 0.5;
  const double y = v * 7.0 - 0.5;
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  auto at = [&](int gy, int gx) -> double {
    if (gx < 0 || gx >= 5 || gy < 0 || gy >= 7) return 0.0;
    return glyph[gy * 5 + gx] == '1' ? 1.0 : 0.0;
  };
  const double fx = x - x0, fy = y - y0;
  return at(y0, x0) * (1 - fx) * (1 - fy) + at(y0, x0 + 1) * fx * (1 - fy) +
         at(y0 + 1, x0) * (1 - fx) * fy + at(y0 + 1, x0 + 1) * fx * fy;
}

}  // namespace detail

// Deterministic jittered-glyph digit images, byte-valued, 28x28. Classes
// cycle 0..9. Intended as a drop-in desk-scale stand-in wherever IDX digit
// data is expected.
inline void make_synth_digits(std::uint64_t seed, int count,
                              std::vector<std::vector<std::uint8_t>>* images,
                              std::vector<std::uint8_t>* labels) {
  images->resize(static_cast<std::size_t>(count));
  labels->resize(static_cast<std::size_t>(count));
  CounterRng rng(seed, "synth-digits");
  for (int i = 0; i < count; ++i) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) * 16;
    const int digit = static_cast<int>(rng.bits(base) % 10);
    const double dx = (rng.uniform01(base + 1) - 0.5) * 8.5;  // pixels
    const double dy = (rng.uniform01(base + 2) - 0.5) * 8.5;
    const double sx = 0.72 + 0.56 * rng.uniform01(base + 3);
    const double sy = 0.72 + 0.56 * rng.uniform01(base + 4);
    const double intensity = 0.60 + 0.40 * rng.uniform01(base + 5);
    const double shear = 0.55 * (rng.uniform01(base + 7) - 0.5);   // slant
    const double thick = 0.75 + 0.50 * rng.uniform01(base + 9);    // stroke gamma
    const char* glyph = detail::digit_glyph(digit);

    std::vector<double> canvas(28 * 28, 0.0);
    const double box_w = 16.0 * sx, box_h = 22.0 * sy;
    const double x0 = (28.0 - box_w) / 2.0 + dx;
    const double y0 = (28.0 - box_h) / 2.0 + dy;
    for (int y = 0; y < 28; ++y) {
      for (int x = 0; x < 28; ++x) {
        const double v = (y - y0) / box_h;
        const double u = (x - x0) / box_w + shear * (v - 0.5);
        const double ink = detail::glyph_sample(glyph, u, v);
        canvas[static_cast<std::size_t>(y * 28 + x)] =
            intensity * std::pow(ink, thick);
      }
    }
    // Background speckle clutter.
    const int speckles = 10 + static_cast<int>(rng.bits(base + 6) % 16);
    for (int s = 0; s < speckles; ++s) {
      const std::uint64_t sb = base + 8;
      const int px = static_cast<int>(rng.bits(sb, static_cast<std::uint32_t>(4 * s)) % 28);
      const int py = static_cast<int>(rng.bits(sb, static_cast<std::uint32_t>(4 * s + 1)) % 28);
      const double amp = 0.65 * rng.uniform01(sb, static_cast<std::uint32_t>(4 * s + 2));
      canvas[static_cast<std::size_t>(py * 28 + px)] += amp;
    }
    // Pixel noise.
    auto& img = (*images)[static_cast<std::size_t>(i)];
    img.resize(28 * 28);
    CounterRng pix(seed, "synth-pixels");
    for (int p = 0; p < 28 * 28; ++p) {
      double v = canvas[static_cast<std::size_t>(p)] +
                 0.17 * pix.gaussian(static_cast<std::uint64_t>(i) * 784 +
                                     static_cast<std::uint64_t>(p));
      v = std::min(1.0, std::max(0.0, v));
      img[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(v * 255.0 + 0.5);
    }
    (*labels)[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(digit);
  }
}

// Write a 4-file IDX corpus (train/test images + labels) under dir.
struct SynthPaths {
  std::string train_images, train_labels, test_images, test_labels;
};

inline SynthPaths write_synth_corpus(const std::string& dir, std::uint64_t seed,
                                     int train_count, int test_count) {
  std::vector<std::vector<std::uint8_t>> images;
  std::vector<std::uint8_t> labels;
  make_synth_digits(seed, train_count, &images, &labels);
  SynthPaths paths;
  paths.train_images = dir + "/train-images-idx3-ubyte";
  paths.train_labels = dir + "/train-labels-idx1-ubyte";
  paths.test_images = dir + "/t10k-images-idx3-ubyte";
  paths.test_labels = dir + "/t10k-labels-idx1-ubyte";
  write_idx_images(paths.train_images, images, 28, 28);
  write_idx_labels(paths.train_labels, labels);
  make_synth_digits(splitmix64(seed ^ 0x7E57DA7Aull), test_count, &images, &labels);
  write_idx_images(paths.test_images, images, 28, 28);
  write_idx_labels(paths.test_labels, labels);
  return paths;
}

}  // namespace neuromac
