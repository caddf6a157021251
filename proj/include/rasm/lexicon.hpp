// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Corpus ingestion into a word lexicon and prefix tree, plus bounded
// edit-distance candidate generation by dynamic programming over the trie.
// Lexicon keys are stored in normalized form (by default diacritics are
// stripped and alef variants unified), so lookups match on letter skeletons.

#ifndef RASM_LEXICON_HPP
#define RASM_LEXICON_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rasm/error.hpp"
#include "rasm/unicode.hpp"

namespace rasm {

struct NormalizeConfig {
  bool strip_diacritics = true;
  bool unify_alef_forms = true;
  bool lowercase_latin = true;
};

// Per-scalar normalization (composition aside): returns 0 when the scalar
// disappears entirely (a stripped diacritic).
inline char32_t normalize_scalar(char32_t cp, const NormalizeConfig& cfg) {
  if (cfg.strip_diacritics && is_arabic_diacritic(cp)) return 0;
  if (cfg.unify_alef_forms && (cp == 0x0622 || cp == 0x0623 || cp == 0x0625))
    return 0x0627;
  if (cfg.lowercase_latin && cp >= U'A' && cp <= U'Z') return cp + 32;
  return cp;
}

inline std::u32string normalize_token(std::u32string_view raw,
                                      const NormalizeConfig& cfg) {
  std::u32string out;
  out.reserve(raw.size());
  for (char32_t cp : compose_arabic(raw)) {
    const char32_t norm = normalize_scalar(cp, cfg);
    if (norm != 0) out.push_back(norm);
  }
  return out;
}

inline std::string normalize_token(std::string_view raw,
                                   const NormalizeConfig& cfg) {
  return utf8_encode(normalize_token(utf8_decode(raw), cfg));
}

// Splits text into maximal runs of word characters (Arabic letters plus
// diacritics). Digits, punctuation and whitespace separate tokens and are
// discarded.
inline std::vector<std::u32string> word_tokens(std::u32string_view text) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t cp : text) {
    if (is_word_char(cp)) {
      cur.push_back(cp);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Word frequency table. Keys are normalized, never empty; total_tokens is
// the sum of all counts.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(NormalizeConfig cfg) : cfg_(cfg) {}

  void add(std::u32string_view raw_token, std::uint64_t count = 1) {
    const std::u32string norm = normalize_token(raw_token, cfg_);
    if (norm.empty()) return;
    entries_[norm] += count;
    total_tokens_ += count;
  }

  bool contains(std::u32string_view normalized_word) const {
    return entries_.find(std::u32string(normalized_word)) != entries_.end();
  }
  std::uint64_t count(std::u32string_view normalized_word) const {
    const auto it = entries_.find(std::u32string(normalized_word));
    return it == entries_.end() ? 0 : it->second;
  }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::u32string, std::uint64_t>& entries() const {
    return entries_;
  }
  const NormalizeConfig& normalize_config() const { return cfg_; }

  bool operator==(const Lexicon& other) const {
    return entries_ == other.entries_ && total_tokens_ == other.total_tokens_;
  }

 private:
  NormalizeConfig cfg_;
  std::map<std::u32string, std::uint64_t> entries_;
  std::uint64_t total_tokens_ = 0;
};

// Ingest a UTF-8 corpus: every maximal word-character run becomes a token.
inline Lexicon build_lexicon(std::string_view corpus,
                             const NormalizeConfig& cfg = {}) {
  Lexicon lex(cfg);
  for (const std::u32string& tok : word_tokens(utf8_decode(corpus))) lex.add(tok);
  return lex;
}

inline Lexicon build_lexicon(std::istream& corpus,
                             const NormalizeConfig& cfg = {}) {
  std::ostringstream ss;
  ss << corpus.rdbuf();
  return build_lexicon(ss.str(), cfg);
}

// Text persistence: one `count<TAB>word` per line, sorted by word.
inline std::string format_lexicon(const Lexicon& lex) {
  std::string out;
  for (const auto& [word, count] : lex.entries()) {
    out += std::to_string(count);
    out += '\t';
    out += utf8_encode(word);
    out += '\n';
  }
  return out;
}

inline Lexicon parse_lexicon(const std::string& text,
                             const NormalizeConfig& cfg = {}) {
  Lexicon lex(cfg);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError("lexicon line " + std::to_string(lineno) +
                        ": missing tab separator");
    std::uint64_t count = 0;
    try {
      count = std::stoull(line.substr(0, tab));
    } catch (const std::exception&) {
      throw FormatError("lexicon line " + std::to_string(lineno) +
                        ": bad count");
    }
    if (count == 0)
      throw FormatError("lexicon line " + std::to_string(lineno) +
                        ": zero count");
    lex.add(utf8_decode(line.substr(tab + 1)), count);
  }
  return lex;
}

inline void save_lexicon(const Lexicon& lex, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write lexicon file " + path);
  out << format_lexicon(lex);
}

inline Lexicon load_lexicon(const std::string& path,
                            const NormalizeConfig& cfg = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str(), cfg);
}

// A lexicon candidate produced by bounded edit-distance search.
struct WordCandidate {
  std::u32string word;
  std::uint32_t distance = 0;
  std::uint64_t count = 0;

  bool operator==(const WordCandidate&) const = default;
};

// Prefix tree over the lexicon's normalized words. Nodes are indices into a
// flat array; children are kept sorted by scalar for binary search. Built
// once, then immutable.
class PrefixTree {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;

  explicit PrefixTree(const Lexicon& lex) : cfg_(lex.normalize_config()) {
    if (lex.empty()) throw ContractError("cannot build a prefix tree from an empty lexicon");
    nodes_.emplace_back();
    // Insertion in sorted key order keeps every child vector sorted.
    for (const auto& [word, count] : lex.entries()) {
      NodeId node = kRoot;
      for (char32_t cp : word) {
        const auto child = find_child(node, cp);
        if (child) {
          node = *child;
        } else {
          nodes_.emplace_back();
          nodes_[node].children.emplace_back(cp,
                                             static_cast<NodeId>(nodes_.size() - 1));
          node = static_cast<NodeId>(nodes_.size() - 1);
        }
      }
      nodes_[node].is_word = true;
      nodes_[node].count = count;
    }
  }

  std::size_t node_count() const { return nodes_.size(); }
  const NormalizeConfig& normalize_config() const { return cfg_; }

  bool is_word(NodeId node) const { return at(node).is_word; }
  std::uint64_t word_count(NodeId node) const { return at(node).count; }

  // Child for the scalar, or nullopt.
  std::optional<NodeId> descend(NodeId node, char32_t cp) const {
    at(node);
    return find_child(node, cp);
  }

  // The exact child key set, in scalar order.
  std::vector<char32_t> next_chars(NodeId node) const {
    const Node& n = at(node);
    std::vector<char32_t> out;
    out.reserve(n.children.size());
    for (const auto& [cp, child] : n.children) out.push_back(cp);
    return out;
  }

  // All (word, count) pairs, in lexicographic word order.
  std::vector<std::pair<std::u32string, std::uint64_t>> enumerate() const {
    std::vector<std::pair<std::u32string, std::uint64_t>> out;
    std::u32string path;
    enumerate_from(kRoot, path, out);
    return out;
  }

  // Lexicon words within Levenshtein distance k of the query, found by
  // carrying a DP row down the trie and pruning branches whose row minimum
  // exceeds k. Results are sorted by (distance, count desc, word).
  std::vector<WordCandidate> candidates_within_distance(std::u32string_view word,
                                                        std::uint32_t k) const {
    std::vector<WordCandidate> out;
    std::vector<std::uint32_t> row(word.size() + 1);
    for (std::size_t i = 0; i < row.size(); ++i)
      row[i] = static_cast<std::uint32_t>(i);
    std::u32string path;
    search_node(kRoot, word, row, k, path, out);
    std::sort(out.begin(), out.end(),
              [](const WordCandidate& a, const WordCandidate& b) {
                if (a.distance != b.distance) return a.distance < b.distance;
                if (a.count != b.count) return a.count > b.count;
                return a.word < b.word;
              });
    return out;
  }

 private:
  struct Node {
    std::vector<std::pair<char32_t, NodeId>> children;  // sorted by scalar
    std::uint64_t count = 0;
    bool is_word = false;
  };

  const Node& at(NodeId node) const {
    if (node >= nodes_.size())
      throw ContractError("unknown prefix tree node id " + std::to_string(node));
    return nodes_[node];
  }

  std::optional<NodeId> find_child(NodeId node, char32_t cp) const {
    const auto& kids = nodes_[node].children;
    const auto it = std::lower_bound(
        kids.begin(), kids.end(), cp,
        [](const std::pair<char32_t, NodeId>& a, char32_t b) { return a.first < b; });
    if (it == kids.end() || it->first != cp) return std::nullopt;
    return it->second;
  }

  void enumerate_from(NodeId node, std::u32string& path,
                      std::vector<std::pair<std::u32string, std::uint64_t>>& out) const {
    const Node& n = nodes_[node];
    if (n.is_word) out.emplace_back(path, n.count);
    for (const auto& [cp, child] : n.children) {
      path.push_back(cp);
      enumerate_from(child, path, out);
      path.pop_back();
    }
  }

  void search_node(NodeId node, std::u32string_view word,
                   const std::vector<std::uint32_t>& row, std::uint32_t k,
                   std::u32string& path, std::vector<WordCandidate>& out) const {
    const Node& n = nodes_[node];
    if (n.is_word && row.back() <= k)
      out.push_back(WordCandidate{path, row.back(), n.count});
    for (const auto& [cp, child] : n.children) {
      std::vector<std::uint32_t> next(row.size());
      next[0] = row[0] + 1;
      std::uint32_t best = next[0];
      for (std::size_t i = 1; i < row.size(); ++i) {
        const std::uint32_t subst = row[i - 1] + (word[i - 1] == cp ? 0 : 1);
        next[i] = std::min({row[i] + 1, next[i - 1] + 1, subst});
        best = std::min(best, next[i]);
      }
      if (best > k) continue;
      path.push_back(cp);
      search_node(child, word, next, k, path, out);
      path.pop_back();
    }
  }

  NormalizeConfig cfg_;
  std::vector<Node> nodes_;
};

inline PrefixTree build_prefix_tree(const Lexicon& lex) { return PrefixTree(lex); }

inline std::vector<WordCandidate> candidates_within_distance(
    const Lexicon& lex, const PrefixTree& tree, std::u32string_view word,
    std::uint32_t k) {
  (void)lex;  // counts already live in the tree
  return tree.candidates_within_distance(word, k);
}

}  // namespace rasm

#endif  // RASM_LEXICON_HPP
