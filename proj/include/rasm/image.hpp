// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RASM_IMAGE_HPP
#define RASM_IMAGE_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "rasm/error.hpp"

namespace rasm {

// Row-major 8-bit grayscale raster. Immutable-by-convention value type:
// operations return fresh images instead of mutating in place.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width * height intensities, 0..255

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        data(static_cast<std::size_t>(check_dims(w, h)) , fill) {}
  GrayImage(int w, int h, std::vector<std::uint8_t> d)
      : width(w), height(h), data(std::move(d)) {
    check_dims(w, h);
    if (data.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h))
      throw DimensionError("GrayImage data length does not match dimensions");
  }

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  // Edge-replicated access: coordinates are clamped into the raster.
  std::uint8_t at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return at(x, y);
  }
  std::size_t pixel_count() const { return data.size(); }

  bool operator==(const GrayImage&) const = default;

 private:
  static std::size_t check_dims(int w, int h) {
    if (w < 1 || h < 1)
      throw DimensionError("image dimensions must be at least 1x1, got " +
                           std::to_string(w) + "x" + std::to_string(h));
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }
};

// Row-major binary raster; 1 marks foreground (ink), 0 background.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // strictly {0,1}

  BinaryImage() = default;
  BinaryImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h) {
    if (w < 1 || h < 1)
      throw DimensionError("image dimensions must be at least 1x1");
    if (fill > 1) throw ConfigError("binary fill value must be 0 or 1");
    data.assign(static_cast<std::size_t>(w) * h, fill);
  }
  BinaryImage(int w, int h, std::vector<std::uint8_t> d)
      : width(w), height(h), data(std::move(d)) {
    if (w < 1 || h < 1)
      throw DimensionError("image dimensions must be at least 1x1");
    if (data.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h))
      throw DimensionError("BinaryImage data length does not match dimensions");
    for (std::uint8_t v : data)
      if (v > 1) throw FormatError("BinaryImage values must be 0 or 1");
  }

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const { return data.size(); }

  bool operator==(const BinaryImage&) const = default;
};

// Photometric inversion, v -> 255 - v.
inline GrayImage invert(const GrayImage& img) {
  GrayImage out = img;
  for (auto& v : out.data) v = static_cast<std::uint8_t>(255 - v);
  return out;
}

}  // namespace rasm

#endif  // RASM_IMAGE_HPP
