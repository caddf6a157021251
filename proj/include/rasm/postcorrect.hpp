// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sentence post-correction: flag out-of-lexicon words, generate candidates
// within a bounded edit distance, score each candidate by (masked-prediction
// cross-entropy) x (whole-sentence perplexity with the candidate substituted),
// and substitute the argmin. Runs up to a fixed number of refinement passes,
// stopping early at a fixed point. Substitution only: tokens are never
// inserted, deleted, split or merged.

#ifndef RASM_POSTCORRECT_HPP
#define RASM_POSTCORRECT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rasm/error.hpp"
#include "rasm/lexicon.hpp"
#include "rasm/lm.hpp"

namespace rasm {

struct CorrectionConfig {
  std::uint32_t max_iterations = 3;    // refinement passes
  std::uint32_t max_edit_distance = 2;
  std::uint32_t max_candidates = 16;
  std::uint32_t min_word_length = 2;   // shorter unknown tokens stay untouched

  void validate() const {
    if (max_iterations < 1 || max_edit_distance < 1 || max_candidates < 1 ||
        min_word_length < 1)
      throw ConfigError("correction config values must be positive");
  }
};

struct Substitution {
  std::size_t word_position = 0;  // index among the sentence's word tokens
  std::u32string original;
  std::u32string replacement;
  double ce_score = 0.0;     // -ln Q(replacement)
  double ppl_score = 0.0;    // sentence perplexity with the replacement
  double final_score = 0.0;  // ce_score * ppl_score
};

struct CorrectionResult {
  std::u32string corrected;
  std::vector<Substitution> substitutions;
  std::vector<std::size_t> uncorrectable;  // flagged words with no candidates
  std::uint32_t iterations = 0;

  std::string corrected_utf8() const { return utf8_encode(corrected); }
};

namespace detail {

enum class TokenKind { Word, Space, Other };

struct SentenceToken {
  std::u32string text;
  TokenKind kind = TokenKind::Other;
};

// Splits a sentence into word / whitespace / other runs; concatenating the
// pieces reproduces the input exactly.
inline std::vector<SentenceToken> tokenize_sentence(std::u32string_view text) {
  std::vector<SentenceToken> out;
  for (char32_t cp : text) {
    const TokenKind kind = is_word_char(cp)    ? TokenKind::Word
                           : is_ascii_space(cp) ? TokenKind::Space
                                                : TokenKind::Other;
    if (out.empty() || out.back().kind != kind)
      out.push_back(SentenceToken{{}, kind});
    out.back().text.push_back(cp);
  }
  return out;
}

}  // namespace detail

// Positions (within the given word sequence) whose normalized form is absent
// from the lexicon and whose length reaches min_word_length. Tokens made of
// digits or punctuation are not words and never reach this function.
inline std::vector<std::size_t> detect_misspelled(
    const std::vector<std::u32string>& words, const Lexicon& lex,
    std::uint32_t min_word_length = 1) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() < min_word_length) continue;
    const std::u32string norm = normalize_token(words[i], lex.normalize_config());
    if (norm.empty()) continue;
    if (!lex.contains(norm)) out.push_back(i);
  }
  return out;
}

inline CorrectionResult correct_sentence(std::u32string_view sentence,
                                         const NGramModel& model,
                                         const Lexicon& lex,
                                         const PrefixTree& tree,
                                         const CorrectionConfig& cfg = {}) {
  cfg.validate();
  if (!model.trained()) throw ContractError("correct_sentence needs a trained model");

  std::vector<detail::SentenceToken> tokens = detail::tokenize_sentence(sentence);
  std::vector<std::size_t> word_token_index;  // word position -> token index
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i].kind == detail::TokenKind::Word) word_token_index.push_back(i);

  CorrectionResult result;
  auto normalized_words = [&]() {
    std::vector<std::u32string> words;
    words.reserve(word_token_index.size());
    for (std::size_t idx : word_token_index)
      words.push_back(normalize_token(tokens[idx].text, lex.normalize_config()));
    return words;
  };

  for (std::uint32_t pass = 0; pass < cfg.max_iterations; ++pass) {
    ++result.iterations;
    std::vector<std::u32string> raw_words;
    raw_words.reserve(word_token_index.size());
    for (std::size_t idx : word_token_index) raw_words.push_back(tokens[idx].text);
    const std::vector<std::size_t> flagged =
        detect_misspelled(raw_words, lex, cfg.min_word_length);
    bool changed = false;
    for (std::size_t pos : flagged) {
      const std::u32string norm =
          normalize_token(tokens[word_token_index[pos]].text, lex.normalize_config());
      std::vector<WordCandidate> candidates =
          tree.candidates_within_distance(norm, cfg.max_edit_distance);
      if (candidates.size() > cfg.max_candidates)
        candidates.resize(cfg.max_candidates);
      if (candidates.empty()) {
        if (pass == 0) result.uncorrectable.push_back(pos);
        continue;
      }

      std::vector<std::u32string> words = normalized_words();
      std::vector<std::u32string> left(words.begin(), words.begin() + pos);
      std::vector<std::u32string> right(words.begin() + pos + 1, words.end());
      std::vector<std::u32string> cand_words;
      cand_words.reserve(candidates.size());
      for (const WordCandidate& c : candidates) cand_words.push_back(c.word);
      const ScoreDistribution q = predict_masked(model, left, right, cand_words);

      std::size_t best = 0;
      double best_final = 0.0, best_ce = 0.0, best_ppl = 0.0;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        // Cross-entropy of the one-hot target against the prediction,
        // which reduces to -ln Q(candidate).
        ScoreDistribution onehot;
        onehot.scores.reserve(cand_words.size());
        for (std::size_t j = 0; j < cand_words.size(); ++j)
          onehot.scores.push_back(ScoredWord{cand_words[j], j == c ? 1.0 : 0.0});
        const double ce = cross_entropy(onehot, q);
        words[pos] = cand_words[c];
        const double ppl = perplexity(model, words);
        const double final_score = ce * ppl;
        if (c == 0 || final_score < best_final) {
          best = c;
          best_final = final_score;
          best_ce = ce;
          best_ppl = ppl;
        }
      }
      result.substitutions.push_back(Substitution{
          pos, tokens[word_token_index[pos]].text, cand_words[best], best_ce,
          best_ppl, best_final});
      tokens[word_token_index[pos]].text = cand_words[best];
      changed = true;
    }
    if (!changed) break;
  }

  for (const auto& tok : tokens) result.corrected += tok.text;
  return result;
}

}  // namespace rasm

#endif  // RASM_POSTCORRECT_HPP
