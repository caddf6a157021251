// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Binary PGM (P5, maxval 255) and binary PBM (P4) readers/writers.
// Writers emit a canonical byte stream: "P5\n<w> <h>\n255\n" / "P4\n<w> <h>\n"
// followed by the raw payload, so identical images serialize identically.

#ifndef RASM_PNM_HPP
#define RASM_PNM_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "rasm/error.hpp"
#include "rasm/image.hpp"

namespace rasm {

namespace detail {

// Reads the next whitespace-delimited token, skipping '#' comments.
inline std::string pnm_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw FormatError(path + ": truncated PNM header");
  return tok;
}

inline int pnm_int(std::istream& in, const std::string& path) {
  const std::string tok = pnm_token(in, path);
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    throw FormatError(path + ": bad PNM header token '" + tok + "'");
  }
}

}  // namespace detail

inline GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open PGM file " + path);
  if (detail::pnm_token(in, path) != "P5")
    throw FormatError(path + ": not a binary PGM (P5) file");
  const int w = detail::pnm_int(in, path);
  const int h = detail::pnm_int(in, path);
  const int maxval = detail::pnm_int(in, path);
  if (maxval != 255) throw FormatError(path + ": only maxval 255 supported");
  // pnm_int consumed the single whitespace after the maxval already.
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size()))
    throw FormatError(path + ": truncated PGM payload");
  return GrayImage(w, h, std::move(data));
}

inline void write_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write PGM file " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) throw IoError("failed writing PGM payload to " + path);
}

// PBM convention: bit 1 = black; we map foreground (ink) to 1. Rows are
// packed MSB-first and padded to a byte boundary.
inline BinaryImage read_pbm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open PBM file " + path);
  if (detail::pnm_token(in, path) != "P4")
    throw FormatError(path + ": not a binary PBM (P4) file");
  const int w = detail::pnm_int(in, path);
  const int h = detail::pnm_int(in, path);
  if (w < 1 || h < 1) throw FormatError(path + ": bad PBM dimensions");
  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  std::vector<std::uint8_t> packed(row_bytes * h);
  in.read(reinterpret_cast<char*>(packed.data()),
          static_cast<std::streamsize>(packed.size()));
  if (in.gcount() != static_cast<std::streamsize>(packed.size()))
    throw FormatError(path + ": truncated PBM payload");
  BinaryImage img(w, h, std::uint8_t{0});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t byte = packed[y * row_bytes + x / 8];
      img.at(x, y) = (byte >> (7 - x % 8)) & 1;
    }
  }
  return img;
}

inline void write_pbm(const BinaryImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write PBM file " + path);
  out << "P4\n" << img.width << " " << img.height << "\n";
  const std::size_t row_bytes = (static_cast<std::size_t>(img.width) + 7) / 8;
  std::vector<std::uint8_t> packed(row_bytes * img.height, 0);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (img.at(x, y))
        packed[y * row_bytes + x / 8] |=
            static_cast<std::uint8_t>(1u << (7 - x % 8));
    }
  }
  out.write(reinterpret_cast<const char*>(packed.data()),
            static_cast<std::streamsize>(packed.size()));
  if (!out) throw IoError("failed writing PBM payload to " + path);
}

}  // namespace rasm

#endif  // RASM_PNM_HPP
