// Copyright 2026 The Sibyl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIBYL_UNICODE_HPP_
#define SIBYL_UNICODE_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sibyl::unicode {

struct CodePoint {
  char32_t value;
  std::size_t offset;  // byte offset in the source string
  std::size_t length;  // encoded byte length
};

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes UTF-8; ill-formed bytes decode as U+FFFD of length 1.
inline std::vector<CodePoint> Decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = kReplacement;
    if (b0 < 0x80) {
      cp = b0;
    } else {
      std::size_t need = 0;
      char32_t min = 0;
      if ((b0 & 0xE0) == 0xC0) { need = 1; cp = b0 & 0x1F; min = 0x80; }
      else if ((b0 & 0xF0) == 0xE0) { need = 2; cp = b0 & 0x0F; min = 0x800; }
      else if ((b0 & 0xF8) == 0xF0) { need = 3; cp = b0 & 0x07; min = 0x10000; }
      bool ok = need > 0;
      for (std::size_t k = 1; ok && k <= need; ++k) {
        if (i + k >= s.size()) { ok = false; break; }
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80) { ok = false; break; }
        cp = (cp << 6) | (bk & 0x3F);
      }
      if (ok && (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) {
        ok = false;
      }
      if (ok) {
        len = need + 1;
      } else {
        cp = kReplacement;
      }
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

inline void Append(std::string& out, char32_t cp) {
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

inline std::string Encode(char32_t cp) {
  std::string s;
  Append(s, cp);
  return s;
}

inline bool IsValidUtf8(std::string_view s) {
  for (const auto& cp : Decode(s)) {
    if (cp.value == kReplacement && cp.length == 1 &&
        static_cast<unsigned char>(s[cp.offset]) >= 0x80) {
      return false;
    }
  }
  return true;
}

constexpr bool IsWhitespace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

constexpr bool IsApostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

constexpr bool IsPunctuation(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 ||
         c == 0xBB || c == 0xBF || (c >= 0x2010 && c <= 0x2027) ||
         (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003) ||
         (c >= 0x3008 && c <= 0x3011) || (c >= 0xFF01 && c <= 0xFF0F) ||
         (c >= 0xFF1A && c <= 0xFF1F);
}

// Pictographs, dingbats, joiners and selectors: neither letters nor
// punctuation.
constexpr bool IsSymbol(char32_t c) {
  return (c >= 0x80 && c < 0xC0 && !IsPunctuation(c)) || c == 0xD7 ||
         c == 0xF7 || (c >= 0x200B && c <= 0x200F) ||
         (c >= 0x2060 && c <= 0x206F) || (c >= 0x2100 && c <= 0x2BFF) ||
         (c >= 0x3012 && c <= 0x303F) || (c >= 0xFE00 && c <= 0xFE0F) ||
         (c >= 0x1F000 && c <= 0x1FAFF) || c >= 0xE0000 || c == kReplacement;
}

constexpr bool IsDigit(char32_t c) { return c >= '0' && c <= '9'; }

// Letter-or-digit. Non-ASCII code points that are not whitespace,
// punctuation or symbols count as letters.
constexpr bool IsAlnum(char32_t c) {
  if (c < 0x80) {
    return IsDigit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  }
  return !IsWhitespace(c) && !IsPunctuation(c) && !IsSymbol(c);
}

constexpr bool IsAsciiLetter(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Simple case mapping for Latin-1, basic Greek and Cyrillic. Enough for
// lexicon case restoration; not a full Unicode case table.
constexpr char32_t ToUpper(char32_t c) {
  if (c >= 'a' && c <= 'z') return c - 32;
  if (c >= 0xE0 && c <= 0xFE && c != 0xF7) return c - 32;
  if (c >= 0x3B1 && c <= 0x3C9 && c != 0x3C2) return c - 32;
  if (c >= 0x430 && c <= 0x44F) return c - 32;
  if (c >= 0x450 && c <= 0x45F) return c - 80;
  return c;
}

constexpr char32_t ToLower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

constexpr bool IsUpper(char32_t c) { return ToLower(c) != c; }

inline std::string Lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const auto& cp : Decode(s)) Append(out, ToLower(cp.value));
  return out;
}

inline bool StartsUpper(std::string_view s) {
  const auto cps = Decode(s);
  return !cps.empty() && IsUpper(cps.front().value);
}

inline std::string CapitalizeFirst(std::string_view s) {
  const auto cps = Decode(s);
  if (cps.empty()) return std::string(s);
  std::string out;
  Append(out, ToUpper(cps.front().value));
  out.append(s.substr(cps.front().length));
  return out;
}

// Applies the first-letter case of `source` to `candidate`.
inline std::string MatchCase(std::string_view source, std::string_view candidate) {
  if (StartsUpper(source)) return CapitalizeFirst(candidate);
  return std::string(candidate);
}

}  // namespace sibyl::unicode

#endif  // SIBYL_UNICODE_HPP_
