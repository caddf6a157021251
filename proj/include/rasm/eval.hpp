// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Edit-distance metrics and corpus-level CER/WER reporting. CER counts
// Unicode scalars (diacritics included unless stripped via EvalConfig);
// WER counts whitespace-separated tokens. Corpus rates are length-weighted:
// total distance over total reference length, not a mean of per-line rates.

#ifndef RASM_EVAL_HPP
#define RASM_EVAL_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "rasm/error.hpp"
#include "rasm/unicode.hpp"

namespace rasm {

// Minimal insert/delete/substitute count with unit costs (two-row DP).
template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  const std::size_t la = a.size(), lb = b.size();
  if (la == 0) return lb;
  if (lb == 0) return la;
  std::vector<std::size_t> prev(lb + 1), cur(lb + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 0; i < la; ++i) {
    cur[0] = i + 1;
    for (std::size_t j = 0; j < lb; ++j) {
      cur[j + 1] = std::min({prev[j + 1] + 1, cur[j] + 1,
                             prev[j] + (a[i] == b[j] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[lb];
}

struct EvalConfig {
  bool strip_diacritics = false;   // drop U+064B..U+0652 from both sides
  bool collapse_whitespace = false;  // trim and squeeze runs to one space
};

namespace detail {

inline std::u32string eval_prepare(std::u32string_view text, const EvalConfig& cfg) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cfg.strip_diacritics && is_arabic_diacritic(cp)) continue;
    out.push_back(cp);
  }
  if (cfg.collapse_whitespace) {
    std::u32string squeezed;
    bool in_space = true;  // leading whitespace is trimmed
    for (char32_t cp : out) {
      if (is_ascii_space(cp)) {
        in_space = true;
        continue;
      }
      if (in_space && !squeezed.empty()) squeezed.push_back(U' ');
      in_space = false;
      squeezed.push_back(cp);
    }
    out = std::move(squeezed);
  }
  return out;
}

inline std::vector<std::u32string> whitespace_tokens(std::u32string_view text) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t cp : text) {
    if (is_ascii_space(cp)) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

// Character error rate: scalar-level edit distance over the reference scalar
// count. May exceed 1. The reference must be nonempty.
inline double cer(std::u32string_view ref, std::u32string_view hyp,
                  const EvalConfig& cfg = {}) {
  const std::u32string r = detail::eval_prepare(ref, cfg);
  const std::u32string h = detail::eval_prepare(hyp, cfg);
  if (r.empty()) throw ContractError("cer needs a nonempty reference");
  return static_cast<double>(levenshtein(r, h)) / static_cast<double>(r.size());
}

// Word error rate over whitespace tokens.
inline double wer(std::u32string_view ref, std::u32string_view hyp,
                  const EvalConfig& cfg = {}) {
  const auto r = detail::whitespace_tokens(detail::eval_prepare(ref, cfg));
  const auto h = detail::whitespace_tokens(detail::eval_prepare(hyp, cfg));
  if (r.empty()) throw ContractError("wer needs a nonempty reference");
  return static_cast<double>(levenshtein(r, h)) / static_cast<double>(r.size());
}

struct LineEval {
  std::u32string ref;
  std::u32string hyp;
  std::size_t char_distance = 0;
  std::size_t word_distance = 0;
  std::size_t ref_chars = 0;
  std::size_t ref_words = 0;
  bool excluded = false;  // empty reference; not aggregated
};

struct EvalReport {
  std::vector<LineEval> lines;
  std::size_t total_char_distance = 0;
  std::size_t total_word_distance = 0;
  std::size_t total_ref_chars = 0;
  std::size_t total_ref_words = 0;
  std::size_t excluded_lines = 0;
  double corpus_cer = 0.0;
  double corpus_wer = 0.0;
};

inline EvalReport evaluate_corpus(
    const std::vector<std::pair<std::u32string, std::u32string>>& pairs,
    const EvalConfig& cfg = {}) {
  if (pairs.empty()) throw ContractError("evaluate_corpus needs at least one pair");
  EvalReport report;
  for (const auto& [ref, hyp] : pairs) {
    LineEval line;
    line.ref = ref;
    line.hyp = hyp;
    const std::u32string r = detail::eval_prepare(ref, cfg);
    const std::u32string h = detail::eval_prepare(hyp, cfg);
    if (r.empty()) {
      line.excluded = true;
      ++report.excluded_lines;
      report.lines.push_back(std::move(line));
      continue;
    }
    const auto rw = detail::whitespace_tokens(r);
    const auto hw = detail::whitespace_tokens(h);
    line.char_distance = levenshtein(r, h);
    line.word_distance = levenshtein(rw, hw);
    line.ref_chars = r.size();
    line.ref_words = rw.size();
    report.total_char_distance += line.char_distance;
    report.total_word_distance += line.word_distance;
    report.total_ref_chars += line.ref_chars;
    report.total_ref_words += line.ref_words;
    report.lines.push_back(std::move(line));
  }
  if (report.total_ref_chars > 0)
    report.corpus_cer = static_cast<double>(report.total_char_distance) /
                        static_cast<double>(report.total_ref_chars);
  if (report.total_ref_words > 0)
    report.corpus_wer = static_cast<double>(report.total_word_distance) /
                        static_cast<double>(report.total_ref_words);
  return report;
}

// Per-line TSV: index, ref_chars, char_dist, cer, ref_words, word_dist, wer.
inline std::string format_report_tsv(const EvalReport& report) {
  std::string out = "line\tref_chars\tchar_dist\tcer\tref_words\tword_dist\twer\n";
  char buf[160];
  for (std::size_t i = 0; i < report.lines.size(); ++i) {
    const LineEval& l = report.lines[i];
    if (l.excluded) {
      std::snprintf(buf, sizeof(buf), "%zu\t-\t-\t-\t-\t-\t-\n", i);
      out += buf;
      continue;
    }
    std::snprintf(buf, sizeof(buf), "%zu\t%zu\t%zu\t%.6f\t%zu\t%zu\t%.6f\n", i,
                  l.ref_chars, l.char_distance,
                  static_cast<double>(l.char_distance) / l.ref_chars,
                  l.ref_words, l.word_distance,
                  l.ref_words ? static_cast<double>(l.word_distance) / l.ref_words
                              : 0.0);
    out += buf;
  }
  return out;
}

}  // namespace rasm

#endif  // RASM_EVAL_HPP
