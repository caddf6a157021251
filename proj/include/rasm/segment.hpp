// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Classical page layout analysis: projection-profile text-line segmentation
// and recursive XY-cut block segmentation with margin/density classification.

#ifndef RASM_SEGMENT_HPP
#define RASM_SEGMENT_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rasm/error.hpp"
#include "rasm/image.hpp"

namespace rasm {

enum class RegionClass { TextBlock, Graph, MarginalNote, TextLine };

inline const char* to_string(RegionClass c) {
  switch (c) {
    case RegionClass::TextBlock: return "TextBlock";
    case RegionClass::Graph: return "Graph";
    case RegionClass::MarginalNote: return "MarginalNote";
    case RegionClass::TextLine: return "TextLine";
  }
  return "?";
}

inline RegionClass region_class_from_string(const std::string& s) {
  if (s == "TextBlock") return RegionClass::TextBlock;
  if (s == "Graph") return RegionClass::Graph;
  if (s == "MarginalNote") return RegionClass::MarginalNote;
  if (s == "TextLine") return RegionClass::TextLine;
  throw FormatError("unknown region class '" + s + "'");
}

struct Region {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  RegionClass cls = RegionClass::TextLine;
  double confidence = 1.0;

  bool operator==(const Region&) const = default;
};

struct SegmentConfig {
  int min_gap_rows = 8;         // blank run that separates lines/blocks
  int min_line_height = 4;      // lines shorter than this are dropped
  int smear_radius = 2;         // dilation radius before XY-cut
  double margin_band_frac = 0.12;  // page fraction forming the margin band

  void validate() const {
    if (min_gap_rows < 1 || min_line_height < 1 || smear_radius < 1)
      throw ConfigError("segmentation pixel parameters must be positive");
    if (margin_band_frac <= 0.0 || margin_band_frac >= 0.5)
      throw ConfigError("margin_band_frac must lie in (0, 0.5)");
  }
};

// Per-row foreground pixel counts.
inline std::vector<int> horizontal_projection(const BinaryImage& bin) {
  std::vector<int> profile(static_cast<std::size_t>(bin.height), 0);
  for (int y = 0; y < bin.height; ++y) {
    int count = 0;
    for (int x = 0; x < bin.width; ++x) count += bin.at(x, y);
    profile[static_cast<std::size_t>(y)] = count;
  }
  return profile;
}

// Projection-profile line segmentation: maximal ink-row runs, merged across
// blank gaps shorter than min_gap_rows, then filtered by min_line_height.
// Boxes are cropped to the foreground column extent and sorted top to bottom.
inline std::vector<Region> segment_lines(const BinaryImage& bin,
                                         const SegmentConfig& cfg) {
  cfg.validate();
  const std::vector<int> profile = horizontal_projection(bin);
  std::vector<std::pair<int, int>> runs;  // [first_row, last_row]
  for (int y = 0; y < bin.height; ++y) {
    if (profile[static_cast<std::size_t>(y)] == 0) continue;
    if (!runs.empty() && y - runs.back().second - 1 < cfg.min_gap_rows)
      runs.back().second = y;
    else
      runs.emplace_back(y, y);
  }
  std::vector<Region> out;
  for (const auto& [top, bottom] : runs) {
    const int h = bottom - top + 1;
    if (h < cfg.min_line_height) continue;
    int x0 = bin.width, x1 = -1;
    for (int y = top; y <= bottom; ++y) {
      for (int x = 0; x < bin.width; ++x) {
        if (!bin.at(x, y)) continue;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
      }
    }
    out.push_back(Region{x0, top, x1 - x0 + 1, h, RegionClass::TextLine, 1.0});
  }
  return out;
}

namespace detail {

// Box dilation by a Chebyshev ball of the given radius (separable passes).
inline BinaryImage dilate(const BinaryImage& bin, int radius) {
  BinaryImage rows(bin.width, bin.height, std::uint8_t{0});
  for (int y = 0; y < bin.height; ++y) {
    int covered = -1;  // rightmost x already written
    for (int x = 0; x < bin.width; ++x) {
      if (!bin.at(x, y)) continue;
      const int to = std::min(x + radius, bin.width - 1);
      for (int xx = std::max(x - radius, covered + 1); xx <= to; ++xx)
        rows.at(xx, y) = 1;
      covered = std::max(covered, to);
    }
  }
  BinaryImage out(bin.width, bin.height, std::uint8_t{0});
  for (int x = 0; x < bin.width; ++x) {
    int covered = -1;
    for (int y = 0; y < bin.height; ++y) {
      if (!rows.at(x, y)) continue;
      const int to = std::min(y + radius, bin.height - 1);
      for (int yy = std::max(y - radius, covered + 1); yy <= to; ++yy)
        out.at(x, yy) = 1;
      covered = std::max(covered, to);
    }
  }
  return out;
}

struct Box {
  int x0, y0, x1, y1;  // inclusive
};

// Tight bounding box of foreground inside the box, or nullopt when empty.
inline std::optional<Box> tight_bbox(const BinaryImage& img, const Box& b) {
  Box t{img.width, img.height, -1, -1};
  for (int y = b.y0; y <= b.y1; ++y) {
    for (int x = b.x0; x <= b.x1; ++x) {
      if (!img.at(x, y)) continue;
      t.x0 = std::min(t.x0, x);
      t.y0 = std::min(t.y0, y);
      t.x1 = std::max(t.x1, x);
      t.y1 = std::max(t.y1, y);
    }
  }
  if (t.x1 < 0) return std::nullopt;
  return t;
}

struct Gap {
  int start = 0, len = 0;
};

// Longest run of empty rows (axis=0) or columns (axis=1) strictly inside the
// box; assumes the box is already trimmed to its tight bbox.
inline Gap longest_gap(const BinaryImage& img, const Box& b, int axis) {
  const int lo = axis == 0 ? b.y0 : b.x0;
  const int hi = axis == 0 ? b.y1 : b.x1;
  Gap best;
  int run_start = -1;
  for (int i = lo; i <= hi + 1; ++i) {
    bool empty = false;
    if (i <= hi) {
      empty = true;
      if (axis == 0) {
        for (int x = b.x0; x <= b.x1 && empty; ++x) empty = !img.at(x, i);
      } else {
        for (int y = b.y0; y <= b.y1 && empty; ++y) empty = !img.at(i, y);
      }
    }
    if (empty) {
      if (run_start < 0) run_start = i;
    } else if (run_start >= 0) {
      const int len = i - run_start;
      if (len > best.len) best = Gap{run_start, len};
      run_start = -1;
    }
  }
  return best;
}

inline void xy_cut(const BinaryImage& smeared, const BinaryImage& original,
                   Box box, int min_gap, std::vector<Box>& leaves) {
  const auto trimmed = tight_bbox(smeared, box);
  if (!trimmed) return;
  box = *trimmed;
  const Gap row_gap = longest_gap(smeared, box, 0);
  const Gap col_gap = longest_gap(smeared, box, 1);
  const bool cut_rows = row_gap.len >= col_gap.len;
  const Gap& gap = cut_rows ? row_gap : col_gap;
  if (gap.len > min_gap) {
    Box first = box, second = box;
    if (cut_rows) {
      first.y1 = gap.start - 1;
      second.y0 = gap.start + gap.len;
    } else {
      first.x1 = gap.start - 1;
      second.x0 = gap.start + gap.len;
    }
    xy_cut(smeared, original, first, min_gap, leaves);
    xy_cut(smeared, original, second, min_gap, leaves);
    return;
  }
  // Leaf: report the tight box of the original (unsmeared) ink.
  if (const auto ink = tight_bbox(original, box)) leaves.push_back(*ink);
}

}  // namespace detail

// Recursive XY-cut over the smeared page. Leaves inside the outer margin
// band become MarginalNote, dense leaves Graph, the rest TextBlock.
inline std::vector<Region> segment_blocks(const BinaryImage& bin,
                                          const SegmentConfig& cfg) {
  cfg.validate();
  const BinaryImage smeared = detail::dilate(bin, cfg.smear_radius);
  std::vector<detail::Box> leaves;
  detail::xy_cut(smeared, bin, {0, 0, bin.width - 1, bin.height - 1},
                 cfg.min_gap_rows, leaves);
  const int band_w = static_cast<int>(cfg.margin_band_frac * bin.width);
  const int band_h = static_cast<int>(cfg.margin_band_frac * bin.height);
  std::vector<Region> out;
  for (const auto& b : leaves) {
    const int w = b.x1 - b.x0 + 1;
    const int h = b.y1 - b.y0 + 1;
    RegionClass cls;
    const bool in_margin = b.x1 < band_w || b.x0 >= bin.width - band_w ||
                           b.y1 < band_h || b.y0 >= bin.height - band_h;
    if (in_margin) {
      cls = RegionClass::MarginalNote;
    } else {
      long long ink = 0;
      for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x) ink += bin.at(x, y);
      const double density =
          static_cast<double>(ink) / (static_cast<double>(w) * h);
      cls = density > 0.5 ? RegionClass::Graph : RegionClass::TextBlock;
    }
    out.push_back(Region{b.x0, b.y0, w, h, cls, 1.0});
  }
  std::sort(out.begin(), out.end(), [](const Region& a, const Region& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return out;
}

// Line-oriented annotation text: one `class x y w h confidence` per line.
inline std::string format_regions(const std::vector<Region>& regions) {
  std::string out;
  char buf[128];
  for (const Region& r : regions) {
    std::snprintf(buf, sizeof(buf), "%s %d %d %d %d %.4f\n", to_string(r.cls),
                  r.x, r.y, r.w, r.h, r.confidence);
    out += buf;
  }
  return out;
}

inline std::vector<Region> parse_regions(const std::string& text) {
  std::vector<Region> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cls;
    Region r;
    if (!(ls >> cls >> r.x >> r.y >> r.w >> r.h >> r.confidence))
      throw FormatError("bad region annotation line: " + line);
    r.cls = region_class_from_string(cls);
    out.push_back(r);
  }
  return out;
}

inline void write_regions(const std::vector<Region>& regions,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write annotation file " + path);
  out << format_regions(regions);
}

inline std::vector<Region> read_regions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotation file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_regions(ss.str());
}

// Extracts a region's pixels from a grayscale page.
inline GrayImage crop(const GrayImage& img, const Region& r) {
  if (r.x < 0 || r.y < 0 || r.w < 1 || r.h < 1 || r.x + r.w > img.width ||
      r.y + r.h > img.height)
    throw DimensionError("crop region outside the image");
  GrayImage out(r.w, r.h, std::uint8_t{0});
  for (int y = 0; y < r.h; ++y)
    for (int x = 0; x < r.w; ++x) out.at(x, y) = img.at(r.x + x, r.y + y);
  return out;
}

}  // namespace rasm

#endif  // RASM_SEGMENT_HPP
