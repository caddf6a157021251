// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Text-line image enhancement: percentile contrast stretch, directional
// Sobel edge map, binarization, text locating (AND of the binarized edge
// and ink maps) and median filtering. All windowed operations use
// edge-replication padding and preserve dimensions.

#ifndef RASM_ENHANCE_HPP
#define RASM_ENHANCE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rasm/error.hpp"
#include "rasm/image.hpp"

namespace rasm {

struct EnhanceConfig {
  double contrast_low_pct = 1.0;   // percentile mapped to 0
  double contrast_high_pct = 99.0; // percentile mapped to 255
  int edge_threshold = 48;         // binarization threshold for the edge map
  int cei_threshold = 128;         // ink threshold on the inverted CEI
  int median_window = 3;           // odd window size M for the median filter

  void validate() const {
    if (contrast_low_pct < 0.0 || contrast_high_pct > 100.0 ||
        contrast_low_pct >= contrast_high_pct)
      throw ConfigError("contrast percentiles must satisfy 0 <= low < high <= 100");
    if (median_window < 3 || median_window % 2 == 0)
      throw ConfigError("median window must be odd and >= 3");
    if (edge_threshold < 0 || edge_threshold > 255 || cei_threshold < 0 ||
        cei_threshold > 255)
      throw ConfigError("thresholds must lie in 0..255");
  }
};

// Percentile linear stretch. Pixels at or below the low percentile map to 0,
// at or above the high percentile to 255, linear (rounded to nearest) in
// between. A degenerate image whose percentiles coincide is returned
// unchanged.
inline GrayImage contrast_enhance(const GrayImage& img, const EnhanceConfig& cfg) {
  cfg.validate();
  std::vector<std::uint8_t> sorted = img.data;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<long long>(sorted.size());
  auto pct_index = [n](double p) {
    return std::clamp<long long>(std::llround(p / 100.0 * (n - 1)), 0, n - 1);
  };
  const int lo = sorted[static_cast<std::size_t>(pct_index(cfg.contrast_low_pct))];
  const int hi = sorted[static_cast<std::size_t>(pct_index(cfg.contrast_high_pct))];
  if (lo == hi) return img;

  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    if (v <= lo) {
      lut[v] = 0;
    } else if (v >= hi) {
      lut[v] = 255;
    } else {
      lut[v] = static_cast<std::uint8_t>(
          std::llround((v - lo) * 255.0 / (hi - lo)));
    }
  }
  GrayImage out = img;
  for (auto& v : out.data) v = lut[v];
  return out;
}

namespace detail {
// 3x3 directional Sobel kernels at 0, 45, 90 and 135 degrees.
inline constexpr std::array<std::array<int, 9>, 4> kSobelKernels = {{
    {-1, 0, 1, -2, 0, 2, -1, 0, 1},
    {0, 1, 2, -1, 0, 1, -2, -1, 0},
    {-1, -2, -1, 0, 0, 0, 1, 2, 1},
    {-2, -1, 0, -1, 0, 1, 0, 1, 2},
}};
}  // namespace detail

// Mean of the absolute responses of the four directional Sobel masks,
// clamped to 0..255.
inline GrayImage directional_edge_map(const GrayImage& img) {
  if (img.width < 3 || img.height < 3)
    throw DimensionError("directional_edge_map needs at least a 3x3 image");
  GrayImage out(img.width, img.height, std::uint8_t{0});
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::array<int, 4> resp{0, 0, 0, 0};
      int k = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx, ++k) {
          const int v = img.at_clamped(x + dx, y + dy);
          for (int m = 0; m < 4; ++m) resp[m] += detail::kSobelKernels[m][k] * v;
        }
      }
      const double mean =
          (std::abs(resp[0]) + std::abs(resp[1]) + std::abs(resp[2]) +
           std::abs(resp[3])) / 4.0;
      out.at(x, y) = static_cast<std::uint8_t>(
          std::min<long long>(255, std::llround(mean)));
    }
  }
  return out;
}

// Thresholding with an inclusive boundary: pixel -> 1 iff intensity >= threshold.
inline BinaryImage binarize(const GrayImage& img, int threshold) {
  BinaryImage out(img.width, img.height, std::uint8_t{0});
  for (std::size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = img.data[i] >= threshold ? 1 : 0;
  return out;
}

// Pixelwise AND of the binarized CEI and edge images; the survivors are the
// text-location image.
inline BinaryImage locate_text(const BinaryImage& cei_bin, const BinaryImage& ei_bin) {
  if (cei_bin.width != ei_bin.width || cei_bin.height != ei_bin.height)
    throw DimensionError("locate_text inputs must share dimensions");
  BinaryImage out = cei_bin;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = cei_bin.data[i] & ei_bin.data[i];
  return out;
}

// Exact MxM median with edge replication, via a sliding 256-bin histogram.
// Per row the histogram is seeded once and then updated by the column that
// enters and the column that leaves, so each output pixel costs O(M + 256).
inline GrayImage median_filter(const GrayImage& img, int window) {
  if (window < 3 || window % 2 == 0)
    throw ConfigError("median window must be odd and >= 3");
  const int r = window / 2;
  const int rank = (window * window) / 2;  // 0-based index of the median
  GrayImage out(img.width, img.height, std::uint8_t{0});
  std::array<int, 256> hist{};
  for (int y = 0; y < img.height; ++y) {
    hist.fill(0);
    for (int dx = -r; dx <= r; ++dx)
      for (int dy = -r; dy <= r; ++dy) ++hist[img.at_clamped(dx, y + dy)];
    for (int x = 0; x < img.width; ++x) {
      int seen = 0;
      for (int v = 0; v < 256; ++v) {
        seen += hist[v];
        if (seen > rank) {
          out.at(x, y) = static_cast<std::uint8_t>(v);
          break;
        }
      }
      if (x + 1 < img.width) {
        for (int dy = -r; dy <= r; ++dy) {
          --hist[img.at_clamped(x - r, y + dy)];
          ++hist[img.at_clamped(x + 1 + r, y + dy)];
        }
      }
    }
  }
  return out;
}

// The full enhancement chain. Ink polarity: input is dark text on a light
// background; non-text pixels (per the TLI) are reset to background white
// before the median pass.
inline GrayImage enhance_line(const GrayImage& img, const EnhanceConfig& cfg) {
  cfg.validate();
  if (img.width < 3 || img.height < 3)
    throw DimensionError("enhance_line needs at least a 3x3 image");
  const GrayImage cei = contrast_enhance(img, cfg);
  const BinaryImage ei_bin = binarize(directional_edge_map(cei), cfg.edge_threshold);
  const BinaryImage cei_bin = binarize(invert(cei), cfg.cei_threshold);
  const BinaryImage tli = locate_text(cei_bin, ei_bin);
  GrayImage masked = cei;
  for (std::size_t i = 0; i < masked.data.size(); ++i)
    if (!tli.data[i]) masked.data[i] = 255;
  return median_filter(masked, cfg.median_window);
}

}  // namespace rasm

#endif  // RASM_ENHANCE_HPP
