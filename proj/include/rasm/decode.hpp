// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Decoders over character emission matrices: greedy, beam search, diverse
// beam search, and prefix-tree-constrained word beam search. All decoding is
// character-synchronous (one symbol per timestep, no blank, no collapse) and
// fully deterministic: score ties are broken lexicographically on the chosen
// symbol-index sequence, which coincides with text order for alphabets listed
// in code-point order and makes beam_search(BW=1) reproduce greedy_decode
// exactly.

#ifndef RASM_DECODE_HPP
#define RASM_DECODE_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rasm/alphabet.hpp"
#include "rasm/emission.hpp"
#include "rasm/error.hpp"
#include "rasm/lexicon.hpp"

namespace rasm {

struct DecodeConfig {
  std::uint32_t beam_width = 16;
  std::uint32_t dbs_groups = 4;     // must divide beam_width
  double dbs_penalty = 0.5;         // Hamming diversity strength
  std::uint32_t max_steps = 0;      // 0 = consume all timesteps

  void validate() const {
    if (beam_width == 0) throw ConfigError("beam width must be positive");
    if (dbs_penalty < 0.0) throw ConfigError("dbs_penalty must be nonnegative");
  }
  // Only diverse beam search cares about the group split.
  void validate_groups() const {
    validate();
    if (dbs_groups == 0 || beam_width % dbs_groups != 0)
      throw ConfigError("dbs_groups must divide beam_width");
  }
};

struct DecodeResult {
  std::u32string text;               // emitted symbols, EOS excluded
  double score = 0.0;                // sum of chosen per-step log-probs
  std::vector<std::uint32_t> steps;  // chosen symbol indices, EOS included
  bool unconstrained = false;        // WBS fell back to an unconstrained beam

  std::string text_utf8() const { return utf8_encode(text); }
};

namespace detail {

inline void check_matrix(const EmissionMatrix& emissions, const Alphabet& alphabet) {
  if (emissions.symbols() != alphabet.size())
    throw DimensionError("emission matrix symbol count " +
                         std::to_string(emissions.symbols()) +
                         " does not match alphabet size " +
                         std::to_string(alphabet.size()));
}

inline std::uint32_t effective_steps(const EmissionMatrix& emissions,
                                     const DecodeConfig& cfg) {
  return cfg.max_steps == 0 ? emissions.timesteps()
                            : std::min(cfg.max_steps, emissions.timesteps());
}

struct Beam {
  std::vector<std::uint32_t> steps;
  double score = 0.0;
  double selection_score = 0.0;  // score plus accumulated diversity penalty
  bool done = false;             // emitted EOS
  // Word beam search state.
  bool word_mode = false;
  PrefixTree::NodeId cursor = PrefixTree::kRoot;

  // Total order used everywhere: higher score first, then lexicographically
  // smaller symbol sequence.
  static bool better(const Beam& a, const Beam& b) {
    if (a.selection_score != b.selection_score)
      return a.selection_score > b.selection_score;
    return a.steps < b.steps;
  }
};

inline void keep_top(std::vector<Beam>& beams, std::size_t width) {
  if (beams.size() > width) {
    std::partial_sort(beams.begin(), beams.begin() + static_cast<std::ptrdiff_t>(width),
                      beams.end(), Beam::better);
    beams.resize(width);
  } else {
    std::sort(beams.begin(), beams.end(), Beam::better);
  }
}

inline DecodeResult to_result(const Beam& beam, const Alphabet& alphabet,
                              bool unconstrained = false) {
  DecodeResult res;
  res.steps = beam.steps;
  res.score = beam.score;
  res.unconstrained = unconstrained;
  for (std::uint32_t idx : beam.steps)
    if (!alphabet.is_eos(idx)) res.text.push_back(alphabet.symbol(idx));
  return res;
}

}  // namespace detail

// Concatenates the most likely symbol of every timestep, stopping at EOS.
// Ties go to the lowest alphabet index.
inline DecodeResult greedy_decode(const EmissionMatrix& emissions,
                                  const Alphabet& alphabet) {
  detail::check_matrix(emissions, alphabet);
  DecodeResult res;
  for (std::uint32_t t = 0; t < emissions.timesteps(); ++t) {
    const auto row = emissions.row(t);
    std::uint32_t best = 0;
    for (std::uint32_t v = 1; v < emissions.symbols(); ++v)
      if (row[v] > row[best]) best = v;
    res.steps.push_back(best);
    res.score += row[best];
    if (alphabet.is_eos(best)) break;
    res.text.push_back(alphabet.symbol(best));
  }
  return res;
}

// Breadth-synchronous beam search. Beams that emit EOS are frozen but keep
// competing for the beam-width slots. Returns survivors best-first.
inline std::vector<DecodeResult> beam_search(const EmissionMatrix& emissions,
                                             const Alphabet& alphabet,
                                             const DecodeConfig& cfg) {
  detail::check_matrix(emissions, alphabet);
  cfg.validate();
  const std::uint32_t steps = detail::effective_steps(emissions, cfg);
  std::vector<detail::Beam> beams(1);
  for (std::uint32_t t = 0; t < steps; ++t) {
    const auto row = emissions.row(t);
    std::vector<detail::Beam> next;
    next.reserve(beams.size() * emissions.symbols());
    for (const detail::Beam& beam : beams) {
      if (beam.done) {
        next.push_back(beam);
        continue;
      }
      for (std::uint32_t v = 0; v < emissions.symbols(); ++v) {
        detail::Beam ext = beam;
        ext.steps.push_back(v);
        ext.score += row[v];
        ext.selection_score = ext.score;
        ext.done = alphabet.is_eos(v);
        next.push_back(std::move(ext));
      }
    }
    beams = std::move(next);
    detail::keep_top(beams, cfg.beam_width);
  }
  std::vector<DecodeResult> out;
  out.reserve(beams.size());
  for (const detail::Beam& beam : beams)
    out.push_back(detail::to_result(beam, alphabet));
  return out;
}

// Diverse beam search with Hamming diversity: the beam splits into G groups
// decoded sequentially per step, and a group's extension scores are docked
// dbs_penalty for every beam of an earlier group that picked the same symbol
// at this step. The penalty shapes selection only; reported scores stay raw
// log-probabilities.
inline std::vector<DecodeResult> diverse_beam_search(const EmissionMatrix& emissions,
                                                     const Alphabet& alphabet,
                                                     const DecodeConfig& cfg) {
  detail::check_matrix(emissions, alphabet);
  cfg.validate_groups();
  const std::uint32_t steps = detail::effective_steps(emissions, cfg);
  const std::uint32_t group_width = cfg.beam_width / cfg.dbs_groups;
  std::vector<std::vector<detail::Beam>> groups(cfg.dbs_groups,
                                                std::vector<detail::Beam>(1));
  for (std::uint32_t t = 0; t < steps; ++t) {
    const auto row = emissions.row(t);
    std::vector<std::uint32_t> chosen_counts(emissions.symbols(), 0);
    for (std::uint32_t g = 0; g < cfg.dbs_groups; ++g) {
      std::vector<detail::Beam> next;
      next.reserve(groups[g].size() * emissions.symbols());
      for (const detail::Beam& beam : groups[g]) {
        if (beam.done) {
          next.push_back(beam);
          continue;
        }
        for (std::uint32_t v = 0; v < emissions.symbols(); ++v) {
          detail::Beam ext = beam;
          ext.steps.push_back(v);
          ext.score += row[v];
          ext.selection_score += row[v] - cfg.dbs_penalty * chosen_counts[v];
          ext.done = alphabet.is_eos(v);
          next.push_back(std::move(ext));
        }
      }
      detail::keep_top(next, group_width);
      groups[g] = std::move(next);
      // Beams frozen in an earlier step made no choice now and count nothing.
      for (const detail::Beam& beam : groups[g])
        if (beam.steps.size() == t + 1) ++chosen_counts[beam.steps.back()];
    }
  }
  std::vector<detail::Beam> all;
  for (auto& g : groups)
    for (auto& beam : g) {
      beam.selection_score = beam.score;  // final ordering is by raw score
      all.push_back(std::move(beam));
    }
  std::sort(all.begin(), all.end(), detail::Beam::better);
  std::vector<DecodeResult> out;
  out.reserve(all.size());
  for (const detail::Beam& beam : all)
    out.push_back(detail::to_result(beam, alphabet));
  return out;
}

// Word beam search. Each beam is either between words (non-word mode) or
// inside one (word mode, with a prefix-tree cursor). Word mode only extends
// along trie children; diacritics pass through freely (they advance the text
// but not the cursor, since the tree is keyed on normalized skeletons).
// Non-word symbols and EOS are only allowed where the cursor completes a
// word. Disallowed symbols are pruned outright; their probability mass is
// ignored, not renormalized.
inline DecodeResult word_beam_search(const EmissionMatrix& emissions,
                                     const Alphabet& alphabet,
                                     const PrefixTree& tree,
                                     const DecodeConfig& cfg) {
  detail::check_matrix(emissions, alphabet);
  cfg.validate();
  const NormalizeConfig& norm = tree.normalize_config();
  const std::uint32_t steps = detail::effective_steps(emissions, cfg);

  std::vector<detail::Beam> beams(1);
  for (std::uint32_t t = 0; t < steps; ++t) {
    const auto row = emissions.row(t);
    std::vector<detail::Beam> next;
    for (const detail::Beam& beam : beams) {
      if (beam.done) {
        next.push_back(beam);
        continue;
      }
      for (std::uint32_t v = 0; v < emissions.symbols(); ++v) {
        const char32_t sym = alphabet.symbol(v);
        detail::Beam ext = beam;
        if (!beam.word_mode) {
          if (alphabet.is_word(v)) {
            // Entering a word: only trie-root children may start one.
            const char32_t skeleton = normalize_scalar(sym, norm);
            if (skeleton == 0) continue;  // bare diacritic between words
            const auto child = tree.descend(PrefixTree::kRoot, skeleton);
            if (!child) continue;
            ext.word_mode = true;
            ext.cursor = *child;
          } else {
            ext.done = alphabet.is_eos(v);
          }
        } else {
          if (alphabet.is_word(v)) {
            const char32_t skeleton = normalize_scalar(sym, norm);
            if (skeleton != 0) {
              const auto child = tree.descend(beam.cursor, skeleton);
              if (!child) continue;
              ext.cursor = *child;
            }
            // A stripped diacritic advances the text but not the cursor.
          } else {
            // Space/digit/punctuation or EOS close the current word; they
            // are legal only on a word-end node.
            if (!tree.is_word(beam.cursor)) continue;
            ext.word_mode = false;
            ext.cursor = PrefixTree::kRoot;
            ext.done = alphabet.is_eos(v);
          }
        }
        ext.steps.push_back(v);
        ext.score += row[v];
        ext.selection_score = ext.score;
        next.push_back(std::move(ext));
      }
    }
    if (next.empty()) break;  // every beam starved; keep the previous set
    beams = std::move(next);
    detail::keep_top(beams, cfg.beam_width);
  }

  // A beam still mid-word is only eligible if its cursor completes a word.
  const detail::Beam* best_eligible = nullptr;
  for (const detail::Beam& beam : beams) {
    if (beam.word_mode && !beam.done && !tree.is_word(beam.cursor)) continue;
    if (!best_eligible || detail::Beam::better(beam, *best_eligible))
      best_eligible = &beam;
  }
  if (best_eligible) return detail::to_result(*best_eligible, alphabet);
  // No eligible beam: fall back to the best raw beam, flagged.
  const detail::Beam* best_raw = &beams.front();
  for (const detail::Beam& beam : beams)
    if (detail::Beam::better(beam, *best_raw)) best_raw = &beam;
  return detail::to_result(*best_raw, alphabet, /*unconstrained=*/true);
}

}  // namespace rasm

#endif  // RASM_DECODE_HPP
