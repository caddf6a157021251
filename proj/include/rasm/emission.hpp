// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-timestep character probability matrix, the decoders' only view of a
// recognition model. Stored as float32 log-probabilities.
//
// EMAT file layout (all integers little-endian uint32, floats IEEE-754
// little-endian): magic "EMAT", version=1, T, V, then T*V row-major floats.

#ifndef RASM_EMISSION_HPP
#define RASM_EMISSION_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rasm/error.hpp"

namespace rasm {

class EmissionMatrix {
 public:
  EmissionMatrix(std::uint32_t timesteps, std::uint32_t symbols,
                 std::vector<float> log_probs)
      : t_(timesteps), v_(symbols), logp_(std::move(log_probs)) {
    if (t_ == 0 || v_ == 0)
      throw DimensionError("emission matrix needs at least one row and symbol");
    if (logp_.size() != static_cast<std::size_t>(t_) * v_)
      throw DimensionError("emission matrix payload size mismatch");
    validate_rows();
  }

  // Builds from per-row probabilities (any floating type), converting to
  // log space.
  static EmissionMatrix from_probs(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows[0].empty())
      throw DimensionError("emission matrix needs at least one row and symbol");
    const std::size_t v = rows[0].size();
    std::vector<float> logp;
    logp.reserve(rows.size() * v);
    for (const auto& row : rows) {
      if (row.size() != v)
        throw DimensionError("emission rows must have equal length");
      for (double p : row)
        logp.push_back(p > 0.0
                           ? static_cast<float>(std::log(p))
                           : -std::numeric_limits<float>::infinity());
    }
    return EmissionMatrix(static_cast<std::uint32_t>(rows.size()),
                          static_cast<std::uint32_t>(v), std::move(logp));
  }

  std::uint32_t timesteps() const { return t_; }
  std::uint32_t symbols() const { return v_; }

  float log_prob(std::uint32_t t, std::uint32_t v) const {
    return logp_[static_cast<std::size_t>(t) * v_ + v];
  }
  std::span<const float> row(std::uint32_t t) const {
    return {logp_.data() + static_cast<std::size_t>(t) * v_, v_};
  }

  bool operator==(const EmissionMatrix&) const = default;

  std::string to_bytes() const {
    std::string out;
    out.reserve(16 + logp_.size() * 4);
    out += "EMAT";
    append_u32(out, 1);
    append_u32(out, t_);
    append_u32(out, v_);
    for (float f : logp_) append_u32(out, std::bit_cast<std::uint32_t>(f));
    return out;
  }

  static EmissionMatrix from_bytes(const std::string& bytes) {
    if (bytes.size() < 16 || bytes.compare(0, 4, "EMAT") != 0)
      throw FormatError("not an EMAT stream (bad magic)");
    const std::uint32_t version = read_u32(bytes, 4);
    if (version != 1)
      throw FormatError("unsupported EMAT version " + std::to_string(version));
    const std::uint32_t t = read_u32(bytes, 8);
    const std::uint32_t v = read_u32(bytes, 12);
    const std::size_t expect = 16 + static_cast<std::size_t>(t) * v * 4;
    if (t == 0 || v == 0 || bytes.size() != expect)
      throw FormatError("EMAT payload size mismatch");
    std::vector<float> logp(static_cast<std::size_t>(t) * v);
    for (std::size_t i = 0; i < logp.size(); ++i)
      logp[i] = std::bit_cast<float>(read_u32(bytes, 16 + i * 4));
    return EmissionMatrix(t, v, std::move(logp));
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write EMAT file " + path);
    const std::string bytes = to_bytes();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing EMAT payload to " + path);
  }

  static EmissionMatrix load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open EMAT file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_bytes(ss.str());
  }

 private:
  void validate_rows() const {
    for (std::uint32_t t = 0; t < t_; ++t) {
      double sum = 0.0;
      for (std::uint32_t v = 0; v < v_; ++v) {
        const float lp = log_prob(t, v);
        if (std::isnan(lp) || lp == std::numeric_limits<float>::infinity())
          throw FormatError("emission row " + std::to_string(t) +
                            " holds a NaN or +inf log-probability");
        sum += std::exp(static_cast<double>(lp));
      }
      if (std::abs(sum - 1.0) > 1e-6)
        throw FormatError("emission row " + std::to_string(t) +
                          " does not sum to 1 (got " + std::to_string(sum) + ")");
    }
  }

  static void append_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
  }
  static std::uint32_t read_u32(const std::string& s, std::size_t off) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[off])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 3])) << 24;
  }

  std::uint32_t t_;
  std::uint32_t v_;
  std::vector<float> logp_;
};

}  // namespace rasm

#endif  // RASM_EMISSION_HPP
