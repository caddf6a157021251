// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RASM_UNICODE_HPP
#define RASM_UNICODE_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "rasm/error.hpp"

namespace rasm {

// Decodes UTF-8 into Unicode scalars. Rejects truncated sequences, stray
// continuation bytes, overlong encodings, surrogates and values beyond
// U+10FFFF; the error message carries the byte offset of the offender.
inline std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len;
    char32_t cp;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      throw FormatError("invalid UTF-8 lead byte at offset " +
                        std::to_string(i));
    }
    if (i + len > s.size()) {
      throw FormatError("truncated UTF-8 sequence at offset " +
                        std::to_string(i));
    }
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        throw FormatError("invalid UTF-8 continuation byte at offset " +
                          std::to_string(i + k));
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMinForLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMinForLen[len]) {
      throw FormatError("overlong UTF-8 encoding at offset " +
                        std::to_string(i));
    }
    if (cp >= 0xD800 && cp <= 0xDFFF) {
      throw FormatError("UTF-8 encoded surrogate at offset " +
                        std::to_string(i));
    }
    if (cp > 0x10FFFF) {
      throw FormatError("UTF-8 code point out of range at offset " +
                        std::to_string(i));
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void utf8_append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string utf8_encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char32_t cp : s) utf8_append(out, cp);
  return out;
}

inline std::string utf8_encode(char32_t cp) {
  std::string out;
  utf8_append(out, cp);
  return out;
}

// Arabic character classes. The letter range deliberately covers the whole
// U+0621..U+064A span (hamza forms, tatweel included); harakat and shadda
// occupy U+064B..U+0652.
inline bool is_arabic_letter(char32_t cp) { return cp >= 0x0621 && cp <= 0x064A; }
inline bool is_arabic_diacritic(char32_t cp) { return cp >= 0x064B && cp <= 0x0652; }
inline bool is_word_char(char32_t cp) {
  return is_arabic_letter(cp) || is_arabic_diacritic(cp);
}
inline bool is_ascii_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\v' || cp == U'\f';
}

// Canonical composition for the Arabic block: a bare alef/waw/yeh followed by
// a combining hamza or madda collapses into the precomposed letter. This is
// the complete NFC composition set reachable from Arabic text; everything
// else is already composed.
inline std::u32string compose_arabic(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (!out.empty()) {
      const char32_t base = out.back();
      char32_t composed = 0;
      if (base == 0x0627 && cp == 0x0653) composed = 0x0622;  // alef madda
      if (base == 0x0627 && cp == 0x0654) composed = 0x0623;  // alef hamza above
      if (base == 0x0648 && cp == 0x0654) composed = 0x0624;  // waw hamza
      if (base == 0x0627 && cp == 0x0655) composed = 0x0625;  // alef hamza below
      if (base == 0x064A && cp == 0x0654) composed = 0x0626;  // yeh hamza
      if (composed != 0) {
        out.back() = composed;
        continue;
      }
    }
    out.push_back(cp);
  }
  return out;
}

}  // namespace rasm

#endif  // RASM_UNICODE_HPP
