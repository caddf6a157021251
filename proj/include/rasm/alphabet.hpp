// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0
//
// Decoder alphabet: an ordered set of Unicode scalars partitioned into word
// characters, non-word characters and a single end-of-sequence symbol.
//
// File format: UTF-8, one symbol per line, line order = symbol index.
// Directive lines switch the class of the symbols that follow: `#word`
// (default at the top of the file), `#nonword`, and `#eos` which must be
// followed by exactly one symbol. A line holding just `#` is the '#' symbol.

#ifndef RASM_ALPHABET_HPP
#define RASM_ALPHABET_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rasm/error.hpp"
#include "rasm/unicode.hpp"

namespace rasm {

enum class SymbolClass : std::uint8_t { Word, NonWord, Eos };

class Alphabet {
 public:
  // Default end-of-sequence glyph used by generated alphabets.
  static constexpr char32_t kDefaultEos = 0x2403;  // ␃

  Alphabet(std::u32string_view word_chars, std::u32string_view nonword_chars,
           char32_t eos = kDefaultEos) {
    for (char32_t cp : word_chars) push(cp, SymbolClass::Word);
    for (char32_t cp : nonword_chars) push(cp, SymbolClass::NonWord);
    push(eos, SymbolClass::Eos);
    eos_index_ = static_cast<std::uint32_t>(symbols_.size() - 1);
  }

  // Ordered (symbol, class) pairs; exactly one Eos entry is required.
  explicit Alphabet(const std::vector<std::pair<char32_t, SymbolClass>>& entries) {
    std::optional<std::uint32_t> eos;
    for (const auto& [cp, cls] : entries) {
      push(cp, cls);
      if (cls == SymbolClass::Eos) {
        if (eos) throw ConfigError("alphabet declares more than one EOS symbol");
        eos = static_cast<std::uint32_t>(symbols_.size() - 1);
      }
    }
    if (!eos) throw ConfigError("alphabet lacks an EOS symbol");
    eos_index_ = *eos;
  }

  std::size_t size() const { return symbols_.size(); }
  char32_t symbol(std::uint32_t index) const {
    if (index >= symbols_.size())
      throw ContractError("alphabet index out of range");
    return symbols_[index];
  }
  SymbolClass symbol_class(std::uint32_t index) const {
    if (index >= symbols_.size())
      throw ContractError("alphabet index out of range");
    return classes_[index];
  }
  std::uint32_t eos_index() const { return eos_index_; }

  bool is_word(std::uint32_t index) const {
    return symbol_class(index) == SymbolClass::Word;
  }
  bool is_nonword(std::uint32_t index) const {
    return symbol_class(index) == SymbolClass::NonWord;
  }
  bool is_eos(std::uint32_t index) const { return index == eos_index_; }

  std::optional<std::uint32_t> index_of(char32_t cp) const {
    const auto it = index_.find(cp);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string to_text() const {
    std::string out;
    SymbolClass current = SymbolClass::Word;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (classes_[i] != current) {
        current = classes_[i];
        switch (current) {
          case SymbolClass::Word: out += "#word\n"; break;
          case SymbolClass::NonWord: out += "#nonword\n"; break;
          case SymbolClass::Eos: out += "#eos\n"; break;
        }
      }
      utf8_append(out, symbols_[i]);
      out += '\n';
    }
    return out;
  }

  static Alphabet from_text(const std::string& text) {
    std::vector<std::pair<char32_t, SymbolClass>> entries;
    SymbolClass current = SymbolClass::Word;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line == "#word") {
        current = SymbolClass::Word;
        continue;
      }
      if (line == "#nonword") {
        current = SymbolClass::NonWord;
        continue;
      }
      if (line == "#eos") {
        current = SymbolClass::Eos;
        continue;
      }
      const std::u32string sym = utf8_decode(line);
      if (sym.size() != 1)
        throw FormatError("alphabet line " + std::to_string(lineno) +
                          ": expected exactly one symbol");
      entries.emplace_back(sym[0], current);
    }
    return Alphabet(entries);
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write alphabet file " + path);
    out << to_text();
  }

  static Alphabet load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open alphabet file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
  }

  // Builds an alphabet covering every scalar of the given text: word
  // characters (sorted) first, then non-word characters (sorted; a space is
  // always included), then the EOS symbol.
  static Alphabet covering(std::u32string_view text, char32_t eos = kDefaultEos) {
    std::u32string word, nonword = U" ";
    for (char32_t cp : text) {
      if (cp == U'\n' || cp == U'\r' || cp == eos) continue;
      std::u32string& bucket = is_word_char(cp) ? word : nonword;
      if (bucket.find(cp) == std::u32string::npos) bucket.push_back(cp);
    }
    std::sort(word.begin(), word.end());
    std::sort(nonword.begin(), nonword.end());
    return Alphabet(word, nonword, eos);
  }

 private:
  void push(char32_t cp, SymbolClass cls) {
    if (index_.count(cp))
      throw ConfigError("duplicate alphabet symbol U+" + std::to_string(cp));
    index_[cp] = static_cast<std::uint32_t>(symbols_.size());
    symbols_.push_back(cp);
    classes_.push_back(cls);
  }

  std::vector<char32_t> symbols_;
  std::vector<SymbolClass> classes_;
  std::unordered_map<char32_t, std::uint32_t> index_;
  std::uint32_t eos_index_ = 0;
};

}  // namespace rasm

#endif  // RASM_ALPHABET_HPP
