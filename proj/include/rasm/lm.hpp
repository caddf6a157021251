// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Backoff n-gram language model over word tokens, serving three roles:
// chain-rule sequence scoring, perplexity, and masked-word prediction over a
// candidate list (softmax of windowed sequence scores). Scoring uses stupid
// backoff: the count ratio at the longest matched order, else alpha times the
// next lower order, bottoming out at an add-one-smoothed unigram so every
// query stays finite.

#ifndef RASM_LM_HPP
#define RASM_LM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rasm/error.hpp"
#include "rasm/unicode.hpp"

namespace rasm {

// Sentence boundary markers; ASCII brackets keep them disjoint from Arabic
// word-character tokens.
inline const std::u32string kSentenceStart = U"<s>";
inline const std::u32string kSentenceEnd = U"</s>";
inline const std::u32string kUnknownToken = U"<unk>";

struct ScoredWord {
  std::u32string word;
  double probability = 0.0;
};

// A normalized distribution over candidate words (sums to 1 within 1e-9).
struct ScoreDistribution {
  std::vector<ScoredWord> scores;

  double probability_of(std::u32string_view word) const {
    for (const ScoredWord& s : scores)
      if (s.word == word) return s.probability;
    throw ContractError("word not present in score distribution");
  }
};

class NGramModel {
 public:
  explicit NGramModel(std::uint32_t order, double alpha = 0.4)
      : order_(order), alpha_(alpha) {
    if (order_ < 1) throw ConfigError("n-gram order must be at least 1");
    if (alpha_ <= 0.0 || alpha_ > 1.0)
      throw ConfigError("backoff alpha must lie in (0, 1]");
  }

  std::uint32_t order() const { return order_; }
  double alpha() const { return alpha_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  bool trained() const { return total_tokens_ > 0; }

  // Counts every k-gram (k <= order) of the sentence. Sentences of an
  // order-n model are padded with n-1 start markers and one end marker;
  // unigram models see the bare tokens.
  void add_sentence(const std::vector<std::u32string>& tokens) {
    if (tokens.empty()) return;
    std::vector<std::u32string> padded;
    if (order_ > 1) {
      padded.assign(order_ - 1, kSentenceStart);
      padded.insert(padded.end(), tokens.begin(), tokens.end());
      padded.push_back(kSentenceEnd);
    } else {
      padded = tokens;
    }
    const std::size_t first_real = order_ > 1 ? order_ - 1 : 0;
    for (std::size_t i = first_real; i < padded.size(); ++i) {
      vocab_.insert(padded[i]);
      ++total_tokens_;
      for (std::uint32_t k = 1; k <= order_ && k <= i + 1; ++k) {
        const std::u32string ctx = join(padded, i - k + 1, i);
        ++counts_[make_key(ctx, padded[i])];
        ++context_totals_[ctx];
      }
    }
  }

  std::uint64_t gram_count(const std::vector<std::u32string>& context,
                           const std::u32string& token) const {
    const auto it = counts_.find(make_key(join(context, 0, context.size()), token));
    return it == counts_.end() ? 0 : it->second;
  }

  // Stupid-backoff conditional probability; strictly positive.
  double probability(const std::u32string& token,
                     std::vector<std::u32string> context) const {
    if (!trained()) throw ContractError("n-gram model is not trained");
    if (context.size() > order_ - 1)
      context.erase(context.begin(),
                    context.end() - static_cast<std::ptrdiff_t>(order_ - 1));
    double discount = 1.0;
    while (!context.empty()) {
      const std::u32string ctx = join(context, 0, context.size());
      const auto hit = counts_.find(make_key(ctx, token));
      if (hit != counts_.end()) {
        const auto total = context_totals_.find(ctx);
        return discount * static_cast<double>(hit->second) /
               static_cast<double>(total->second);
      }
      discount *= alpha_;
      context.erase(context.begin());
    }
    const auto uni = counts_.find(make_key(std::u32string(), token));
    if (uni != counts_.end())
      return discount * static_cast<double>(uni->second) /
             static_cast<double>(total_tokens_);
    // Unseen token: add-one floor over the vocabulary plus the unknown slot.
    return discount * alpha_ /
           static_cast<double>(total_tokens_ + vocab_.size() + 1);
  }

  const std::set<std::u32string>& vocabulary() const { return vocab_; }

  // Serialization: header `ngram <n> <alpha>`, then sorted
  // `order<TAB>context<TAB>token<TAB>count` lines (context tokens joined by
  // single spaces; empty for unigrams).
  std::string to_text() const {
    std::ostringstream out;
    out << "ngram " << order_ << " " << format_double(alpha_) << "\n";
    std::vector<std::tuple<std::uint32_t, std::string, std::string, std::uint64_t>> rows;
    rows.reserve(counts_.size());
    for (const auto& [key, count] : counts_) {
      const auto sep = key.find(U'\x1f');
      const std::u32string ctx = key.substr(0, sep);
      const std::u32string tok = key.substr(sep + 1);
      const std::uint32_t k =
          ctx.empty() ? 1 : static_cast<std::uint32_t>(
                                std::count(ctx.begin(), ctx.end(), U' ') + 2);
      rows.emplace_back(k, utf8_encode(ctx), utf8_encode(tok), count);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [k, ctx, tok, count] : rows)
      out << k << "\t" << ctx << "\t" << tok << "\t" << count << "\n";
    return out.str();
  }

  static NGramModel from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty n-gram model file");
    std::istringstream header(line);
    std::string tag;
    std::uint32_t order = 0;
    double alpha = 0.0;
    if (!(header >> tag >> order >> alpha) || tag != "ngram")
      throw FormatError("bad n-gram model header: " + line);
    NGramModel model(order, alpha);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::size_t start = 0;
      for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
          fields.push_back(line.substr(start, i - start));
          start = i + 1;
        }
      }
      if (fields.size() != 4)
        throw FormatError("n-gram model line " + std::to_string(lineno) +
                          ": expected 4 tab-separated fields");
      const std::u32string ctx = utf8_decode(fields[1]);
      const std::u32string tok = utf8_decode(fields[2]);
      std::uint64_t count = 0;
      try {
        count = std::stoull(fields[3]);
      } catch (const std::exception&) {
        throw FormatError("n-gram model line " + std::to_string(lineno) +
                          ": bad count");
      }
      model.counts_[make_key(ctx, tok)] += count;
      model.context_totals_[ctx] += count;
      if (ctx.empty()) {
        model.total_tokens_ += count;
        model.vocab_.insert(tok);
      }
    }
    if (!model.trained()) throw FormatError("n-gram model holds no unigrams");
    return model;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write n-gram model file " + path);
    out << to_text();
  }

  static NGramModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open n-gram model file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
  }

 private:
  static std::u32string join(const std::vector<std::u32string>& tokens,
                             std::size_t first, std::size_t last_exclusive) {
    std::u32string out;
    for (std::size_t i = first; i < last_exclusive; ++i) {
      if (i > first) out.push_back(U' ');
      out += tokens[i];
    }
    return out;
  }
  static std::u32string make_key(const std::u32string& context,
                                 const std::u32string& token) {
    std::u32string key = context;
    key.push_back(U'\x1f');
    key += token;
    return key;
  }
  static std::string format_double(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
  }

  std::uint32_t order_;
  double alpha_;
  std::unordered_map<std::u32string, std::uint64_t> counts_;
  std::unordered_map<std::u32string, std::uint64_t> context_totals_;
  std::set<std::u32string> vocab_;
  std::uint64_t total_tokens_ = 0;
};

// Trains on a token stream: one sentence per inner vector.
inline NGramModel train_ngram(const std::vector<std::vector<std::u32string>>& corpus,
                              std::uint32_t order, double alpha = 0.4) {
  NGramModel model(order, alpha);
  for (const auto& sentence : corpus) model.add_sentence(sentence);
  if (!model.trained()) throw ContractError("cannot train n-gram model on an empty corpus");
  return model;
}

// Chain-rule log-probability: sum of log P(w_i | previous min(n-1, i-1)
// tokens). No boundary padding is added; the empty sequence scores 0.
inline double sequence_logprob(const NGramModel& model,
                               const std::vector<std::u32string>& tokens) {
  if (!model.trained()) throw ContractError("n-gram model is not trained");
  double total = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t ctx_len =
        std::min<std::size_t>(model.order() - 1, i);
    std::vector<std::u32string> context(tokens.begin() + (i - ctx_len),
                                        tokens.begin() + i);
    total += std::log(model.probability(tokens[i], std::move(context)));
  }
  return total;
}

// exp of the mean negative log-probability.
inline double perplexity(const NGramModel& model,
                         const std::vector<std::u32string>& tokens) {
  if (tokens.empty())
    throw ContractError("perplexity of an empty sequence is undefined");
  return std::exp(-sequence_logprob(model, tokens) /
                  static_cast<double>(tokens.size()));
}

// Masked-word prediction: each candidate is scored by the log-probability of
// the window [last n-1 left tokens, candidate, first n-1 right tokens] and
// the scores are softmax-normalized into a distribution.
inline ScoreDistribution predict_masked(const NGramModel& model,
                                        const std::vector<std::u32string>& left,
                                        const std::vector<std::u32string>& right,
                                        const std::vector<std::u32string>& candidates) {
  if (candidates.empty())
    throw ContractError("predict_masked needs at least one candidate");
  const std::size_t ctx = model.order() - 1;
  std::vector<std::u32string> window;
  const std::size_t left_take = std::min(ctx, left.size());
  window.assign(left.end() - static_cast<std::ptrdiff_t>(left_take), left.end());
  const std::size_t mask_pos = window.size();
  window.emplace_back();
  for (std::size_t i = 0; i < std::min(ctx, right.size()); ++i)
    window.push_back(right[i]);

  std::vector<double> logps;
  logps.reserve(candidates.size());
  double max_logp = -std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) {
    window[mask_pos] = cand;
    const double lp = sequence_logprob(model, window);
    logps.push_back(lp);
    max_logp = std::max(max_logp, lp);
  }
  double denom = 0.0;
  for (double lp : logps) denom += std::exp(lp - max_logp);
  ScoreDistribution dist;
  dist.scores.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    dist.scores.push_back(
        ScoredWord{candidates[i], std::exp(logps[i] - max_logp) / denom});
  return dist;
}

// H(P,Q) = -sum P(x) ln Q(x), natural log. Both distributions must cover the
// same candidate set; a zero Q under positive P yields +infinity.
inline double cross_entropy(const ScoreDistribution& p, const ScoreDistribution& q) {
  if (p.scores.size() != q.scores.size())
    throw ContractError("cross_entropy supports differ in size");
  std::map<std::u32string, double> q_by_word;
  for (const ScoredWord& s : q.scores) q_by_word[s.word] = s.probability;
  double h = 0.0;
  for (const ScoredWord& s : p.scores) {
    const auto it = q_by_word.find(s.word);
    if (it == q_by_word.end())
      throw ContractError("cross_entropy supports differ: missing " +
                          utf8_encode(s.word));
    if (s.probability == 0.0) continue;
    if (it->second == 0.0) return std::numeric_limits<double>::infinity();
    h -= s.probability * std::log(it->second);
  }
  return h;
}

}  // namespace rasm

#endif  // RASM_LM_HPP
