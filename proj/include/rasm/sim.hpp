// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Synthesis harness for closed-loop testing: emission matrices with
// Arabic-specific confusion noise, word-level text corruption, image
// augmentation, and synthetic pages with exact line ground truth. Every
// operation is a pure function of (input, config, seed) via counter-based
// randomness, so outputs are bit-reproducible.

#ifndef RASM_SIM_HPP
#define RASM_SIM_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rasm/alphabet.hpp"
#include "rasm/emission.hpp"
#include "rasm/error.hpp"
#include "rasm/image.hpp"
#include "rasm/rng.hpp"
#include "rasm/segment.hpp"
#include "rasm/unicode.hpp"

namespace rasm {

// Letters that do not join to the following letter; a decoder may hallucinate
// a space after one of them mid-word.
inline bool is_non_connecting_letter(char32_t cp) {
  switch (cp) {
    case 0x0621:  // hamza
    case 0x0622: case 0x0623: case 0x0624: case 0x0625:  // hamza carriers
    case 0x0627:  // alef
    case 0x0629:  // teh marbuta
    case 0x062F: case 0x0630:  // dal, thal
    case 0x0631: case 0x0632:  // reh, zain
    case 0x0648:  // waw
    case 0x0649:  // alef maksura
      return true;
    default:
      return false;
  }
}

// The 36 base Arabic letters used for random substitutions.
inline const std::u32string& basic_arabic_letters() {
  static const std::u32string letters = [] {
    std::u32string out;
    for (char32_t cp = 0x0621; cp <= 0x063A; ++cp) out.push_back(cp);
    for (char32_t cp = 0x0641; cp <= 0x064A; ++cp) out.push_back(cp);
    return out;
  }();
  return letters;
}

struct Confusion {
  char32_t from = 0;
  char32_t to = 0;
  double prob = 0.0;  // chance that a position showing `from` leans to `to`
};

struct NoiseConfig {
  double epsilon = 0.01;       // smoothing mass spread over non-target symbols
  std::vector<Confusion> confusions = {
      {0x064A, 0x0628, 0.1},   // yeh -> beh (dotting)
      {0x0628, 0x064A, 0.1},   // beh -> yeh
  };
  double space_split_prob = 0.1;  // spurious space after a non-connecting letter
  std::uint64_t seed = 0;

  static NoiseConfig none() { return NoiseConfig{0.0, {}, 0.0, 0}; }

  void validate() const {
    if (epsilon < 0.0 || epsilon >= 1.0)
      throw ConfigError("noise epsilon must lie in [0, 1)");
    if (space_split_prob < 0.0 || space_split_prob > 1.0)
      throw ConfigError("space_split_prob must lie in [0, 1]");
    for (const Confusion& c : confusions) {
      if (c.prob < 0.0 || c.prob > 1.0)
        throw ConfigError("confusion probability must lie in [0, 1]");
      if (c.from == c.to)
        throw ConfigError("confusion must map between distinct symbols");
    }
  }
};

// Builds a T=len(text)+1 emission matrix. Each row puts the bulk of the mass
// on the true symbol, the configured masses on its confusable symbols, and
// spreads epsilon uniformly over the rest; the final row favors EOS. With
// probability `prob` (per applicable position, seeded) a confusion fires and
// the true/confused masses swap, making the confused symbol the argmax. The
// bulk mass must stay at least as large as every confusion mass.
inline EmissionMatrix synth_emissions(std::u32string_view text,
                                      const Alphabet& alphabet,
                                      const NoiseConfig& noise) {
  noise.validate();
  const std::size_t v = alphabet.size();
  std::vector<std::uint32_t> true_indices;
  true_indices.reserve(text.size());
  for (char32_t cp : text) {
    const auto idx = alphabet.index_of(cp);
    if (!idx)
      throw ContractError("text symbol U+" + std::to_string(cp) +
                          " is not in the alphabet");
    true_indices.push_back(*idx);
  }
  const auto space_index = alphabet.index_of(U' ');

  CounterRng rng(noise.seed, /*stream=*/0xE31A);
  std::vector<std::vector<double>> rows;
  rows.reserve(text.size() + 1);
  for (std::size_t t = 0; t < text.size(); ++t) {
    const char32_t sym = text[t];
    const std::uint32_t true_idx = true_indices[t];
    std::vector<double> row(v, 0.0);

    struct Rival { std::uint32_t index; double mass; double fire_prob; };
    std::vector<Rival> rivals;
    auto has_rival = [&](std::uint32_t idx) {
      for (const Rival& r : rivals)
        if (r.index == idx) return true;
      return false;
    };
    for (const Confusion& c : noise.confusions) {
      if (c.from != sym || c.prob <= 0.0) continue;
      const auto to_idx = alphabet.index_of(c.to);
      if (!to_idx || *to_idx == true_idx || has_rival(*to_idx)) continue;
      rivals.push_back(Rival{*to_idx, c.prob, c.prob});
    }
    const bool split_applicable =
        noise.space_split_prob > 0.0 && space_index && t > 0 &&
        is_word_char(sym) && is_non_connecting_letter(text[t - 1]) &&
        *space_index != true_idx && !has_rival(*space_index);
    if (split_applicable)
      rivals.push_back(Rival{*space_index, noise.space_split_prob,
                             noise.space_split_prob});

    double rival_mass = 0.0;
    for (const Rival& r : rivals) rival_mass += r.mass;
    const double bulk = 1.0 - noise.epsilon - rival_mass;
    for (const Rival& r : rivals) {
      if (bulk < r.mass)
        throw ConfigError("confusion masses too large: true-symbol mass "
                          "would drop below a confusion mass");
    }
    if (bulk <= 0.0) throw ConfigError("confusion masses and epsilon exceed 1");

    row[true_idx] = bulk;
    for (const Rival& r : rivals) row[r.index] = r.mass;
    // One corruption at most per position: the first rival whose coin fires
    // trades masses with the true symbol and becomes the argmax.
    for (const Rival& r : rivals) {
      if (rng.next_bool(r.fire_prob)) {
        std::swap(row[true_idx], row[r.index]);
        break;
      }
    }
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < v; ++i)
      if (row[i] == 0.0) ++free_count;
    if (noise.epsilon > 0.0) {
      if (free_count > 0) {
        const double share = noise.epsilon / static_cast<double>(free_count);
        for (std::size_t i = 0; i < v; ++i)
          if (row[i] == 0.0) row[i] = share;
      } else {
        row[true_idx] += noise.epsilon;
      }
    }
    rows.push_back(std::move(row));
  }

  // Terminal row: EOS carries the bulk.
  std::vector<double> last(v, 0.0);
  if (noise.epsilon > 0.0 && v > 1) {
    last.assign(v, noise.epsilon / static_cast<double>(v - 1));
    last[alphabet.eos_index()] = 1.0 - noise.epsilon;
  } else {
    last[alphabet.eos_index()] = 1.0;
  }
  rows.push_back(std::move(last));
  return EmissionMatrix::from_probs(rows);
}

// Corrupts each word independently with the given probability by one random
// in-alphabet letter substitution (the replacement always differs from the
// original, so a corrupted word sits at Levenshtein distance exactly 1).
inline std::u32string corrupt_text(std::u32string_view text, double rate,
                                   std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0)
    throw ConfigError("corruption rate must lie in [0, 1]");
  CounterRng rng(seed, /*stream=*/0xC05E);
  std::u32string out;
  out.reserve(text.size());
  std::size_t word_start = out.size();
  bool in_word = false;
  auto corrupt_span = [&](std::size_t start, std::size_t end) {
    if (end <= start) return;
    if (!rng.next_bool(rate)) return;
    const std::size_t pos = start + rng.next_below(end - start);
    const std::u32string& pool = basic_arabic_letters();
    char32_t replacement = out[pos];
    while (replacement == out[pos])
      replacement = pool[rng.next_below(pool.size())];
    out[pos] = replacement;
  };
  for (char32_t cp : text) {
    const bool word_char = is_word_char(cp);
    if (word_char && !in_word) {
      word_start = out.size();
      in_word = true;
    } else if (!word_char && in_word) {
      corrupt_span(word_start, out.size());
      in_word = false;
    }
    out.push_back(cp);
  }
  if (in_word) corrupt_span(word_start, out.size());
  return out;
}

struct AugmentConfig {
  double rotation_min_deg = 0.0;
  double rotation_max_deg = 0.0;
  double stretch_min = 1.0;
  double stretch_max = 1.0;
  int brightness_min = 0;
  int brightness_max = 0;
  double salt_pepper_density = 0.0;
  int crop_max = 0;
  int pad_max = 0;
  std::uint64_t seed = 0;

  void validate() const {
    if (rotation_min_deg > rotation_max_deg || stretch_min > stretch_max ||
        brightness_min > brightness_max)
      throw ConfigError("augment ranges must be well-ordered");
    if (stretch_min <= 0.0) throw ConfigError("stretch factors must be positive");
    if (salt_pepper_density < 0.0 || salt_pepper_density >= 1.0)
      throw ConfigError("salt_pepper_density must lie in [0, 1)");
    if (crop_max < 0 || pad_max < 0)
      throw ConfigError("crop/pad margins must be nonnegative");
  }
};

namespace detail {

inline GrayImage rotate_bilinear(const GrayImage& img, double degrees) {
  const double rad = degrees * 3.14159265358979323846 / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  const double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;
  GrayImage out(img.width, img.height, std::uint8_t{255});
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double dx = x - cx, dy = y - cy;
      const double sx = cx + c * dx + s * dy;
      const double sy = cy - s * dx + c * dy;
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      if (x0 < -1 || y0 < -1 || x0 > img.width - 1 || y0 > img.height - 1)
        continue;  // outside: keep background
      const double fx = sx - x0, fy = sy - y0;
      auto sample = [&](int xx, int yy) -> double {
        if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) return 255.0;
        return img.at(xx, yy);
      };
      const double val = sample(x0, y0) * (1 - fx) * (1 - fy) +
                         sample(x0 + 1, y0) * fx * (1 - fy) +
                         sample(x0, y0 + 1) * (1 - fx) * fy +
                         sample(x0 + 1, y0 + 1) * fx * fy;
      out.at(x, y) = static_cast<std::uint8_t>(
          std::clamp<long>(std::lround(val), 0, 255));
    }
  }
  return out;
}

inline GrayImage stretch_horizontal(const GrayImage& img, double factor) {
  const int new_w = std::max(1, static_cast<int>(std::lround(img.width * factor)));
  GrayImage out(new_w, img.height, std::uint8_t{255});
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < new_w; ++x) {
      const double sx = (x + 0.5) * img.width / new_w - 0.5;
      const int x0 = static_cast<int>(std::floor(sx));
      const double fx = sx - x0;
      auto sample = [&](int xx) -> double {
        return img.at(std::clamp(xx, 0, img.width - 1), y);
      };
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp<long>(
          std::lround(sample(x0) * (1 - fx) + sample(x0 + 1) * fx), 0, 255));
    }
  }
  return out;
}

}  // namespace detail

// Applies, in fixed order: rotation (bilinear, white fill), horizontal
// stretch, brightness shift, crop then pad, and salt-and-pepper noise.
inline GrayImage augment_image(const GrayImage& img, const AugmentConfig& cfg) {
  cfg.validate();
  if (2 * cfg.crop_max >= img.width || 2 * cfg.crop_max >= img.height)
    throw ConfigError("crop margins could consume the whole image");
  CounterRng rng(cfg.seed, /*stream=*/0xA06);
  const double angle = rng.next_real(cfg.rotation_min_deg, cfg.rotation_max_deg);
  const double factor = rng.next_real(cfg.stretch_min, cfg.stretch_max);
  const int brightness =
      static_cast<int>(rng.next_int(cfg.brightness_min, cfg.brightness_max));
  const int crop_l = static_cast<int>(rng.next_int(0, cfg.crop_max));
  const int crop_r = static_cast<int>(rng.next_int(0, cfg.crop_max));
  const int crop_t = static_cast<int>(rng.next_int(0, cfg.crop_max));
  const int crop_b = static_cast<int>(rng.next_int(0, cfg.crop_max));
  const int pad_l = static_cast<int>(rng.next_int(0, cfg.pad_max));
  const int pad_r = static_cast<int>(rng.next_int(0, cfg.pad_max));
  const int pad_t = static_cast<int>(rng.next_int(0, cfg.pad_max));
  const int pad_b = static_cast<int>(rng.next_int(0, cfg.pad_max));

  GrayImage out = img;
  if (angle != 0.0) out = detail::rotate_bilinear(out, angle);
  if (factor != 1.0) out = detail::stretch_horizontal(out, factor);
  if (brightness != 0) {
    for (auto& v : out.data)
      v = static_cast<std::uint8_t>(std::clamp(v + brightness, 0, 255));
  }
  if (crop_l + crop_r > 0 || crop_t + crop_b > 0) {
    const int w = out.width - crop_l - crop_r;
    const int h = out.height - crop_t - crop_b;
    if (w < 1 || h < 1) throw ConfigError("crop larger than image");
    out = crop(out, Region{crop_l, crop_t, w, h, RegionClass::TextLine, 1.0});
  }
  if (pad_l + pad_r + pad_t + pad_b > 0) {
    GrayImage padded(out.width + pad_l + pad_r, out.height + pad_t + pad_b,
                     std::uint8_t{255});
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        padded.at(x + pad_l, y + pad_t) = out.at(x, y);
    out = std::move(padded);
  }
  if (cfg.salt_pepper_density > 0.0) {
    for (auto& v : out.data)
      if (rng.next_bool(cfg.salt_pepper_density))
        v = rng.next_bool(0.5) ? 255 : 0;
  }
  return out;
}

struct PageGeometry {
  int width = 800;
  int height = 1000;
  int min_band_height = 10;
  int max_band_height = 30;
  int min_gap = 12;
  int max_gap = 40;
  int margin_x = 40;
  int x_jitter = 60;

  void validate(int line_count) const {
    if (line_count < 1) throw ConfigError("page needs at least one line");
    if (width < 8 || height < 8)
      throw ConfigError("page dimensions too small");
    if (min_band_height < 1 || min_band_height > max_band_height ||
        min_gap < 1 || min_gap > max_gap || margin_x < 0 || x_jitter < 0)
      throw ConfigError("page geometry ranges must be well-ordered and positive");
    // Worst-case fit, so any seed lays out successfully.
    const long long need = static_cast<long long>(max_gap) +
                           static_cast<long long>(line_count) * max_band_height +
                           static_cast<long long>(line_count - 1) * max_gap;
    if (need > height)
      throw ConfigError("infeasible page geometry: " + std::to_string(line_count) +
                        " bands cannot fit a height of " + std::to_string(height));
    if (2 * (margin_x + x_jitter) + 8 > width)
      throw ConfigError("infeasible page geometry: margins leave no band width");
  }
};

// K solid foreground bands with randomized heights, gaps and horizontal
// extents, plus their exact ground-truth boxes (top to bottom).
inline std::pair<BinaryImage, std::vector<Region>> synth_page(
    int line_count, const PageGeometry& geo, std::uint64_t seed) {
  geo.validate(line_count);
  CounterRng rng(seed, /*stream=*/0x9A6E);
  BinaryImage page(geo.width, geo.height, std::uint8_t{0});
  std::vector<Region> truth;
  int y = static_cast<int>(rng.next_int(geo.min_gap, geo.max_gap));
  for (int i = 0; i < line_count; ++i) {
    const int h =
        static_cast<int>(rng.next_int(geo.min_band_height, geo.max_band_height));
    const int x0 = geo.margin_x + static_cast<int>(rng.next_int(0, geo.x_jitter));
    const int x1 = geo.width - geo.margin_x -
                   static_cast<int>(rng.next_int(0, geo.x_jitter));
    for (int yy = y; yy < y + h; ++yy)
      for (int xx = x0; xx < x1; ++xx) page.at(xx, yy) = 1;
    truth.push_back(Region{x0, y, x1 - x0, h, RegionClass::TextLine, 1.0});
    y += h;
    if (i + 1 < line_count)
      y += static_cast<int>(rng.next_int(geo.min_gap, geo.max_gap));
  }
  return {std::move(page), std::move(truth)};
}

}  // namespace rasm

#endif  // RASM_SIM_HPP
