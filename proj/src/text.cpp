#include "interpeval/text.hpp"

#ifdef INTERPEVAL_HAVE_ICU
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#endif

#include "interpeval/error.hpp"

namespace interpeval {

namespace {

// Decodes one UTF-8 code point starting at `pos`; advances `pos` past it.
// Malformed bytes decode as U+FFFD one byte at a time, which keeps the
// tokenizer total (never throws) on dirty input.
char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  unsigned char b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  char32_t cp = b0;
  if (b0 < 0x80) {
    len = 1;
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
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < len; ++i) {
    unsigned char b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
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

bool is_line_break(char32_t cp) {
  return cp == U'\n' || cp == U'\r' || cp == 0x0B || cp == 0x0C ||
         cp == 0x85 || cp == 0x2028 || cp == 0x2029;
}

bool is_other_control(char32_t cp) {
  return (cp < 0x20 && cp != U'\t') || cp == 0x7F ||
         (cp >= 0x80 && cp <= 0x9F);
}

std::string nfc(std::string_view text) {
#ifdef INTERPEVAL_HAVE_ICU
  UErrorCode ec = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(ec);
  if (U_FAILURE(ec)) {
    throw DataError("ICU NFC normalizer unavailable");
  }
  icu::UnicodeString u =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString composed = norm->normalize(u, ec);
  if (U_FAILURE(ec)) {
    throw DataError("NFC normalization failed");
  }
  std::string out;
  composed.toUTF8String(out);
  return out;
#else
  // Without ICU the text passes through unchanged; callers are expected to
  // feed already-composed input.
  return std::string(text);
#endif
}

}  // namespace

std::string normalize_text(std::string_view text) {
  std::string composed = nfc(text);
  std::string out;
  out.reserve(composed.size());
  std::size_t pos = 0;
  while (pos < composed.size()) {
    char32_t cp = decode_utf8(composed, pos);
    if (cp == U'\t' || is_line_break(cp)) {
      out.push_back(' ');
    } else if (is_other_control(cp)) {
      // dropped
    } else {
      encode_utf8(cp, out);
    }
  }
  return out;
}

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680:
    case 0x2000: case 0x2001: case 0x2002: case 0x2003: case 0x2004:
    case 0x2005: case 0x2006: case 0x2007: case 0x2008: case 0x2009:
    case 0x200A: case 0x2028: case 0x2029: case 0x202F: case 0x205F:
    case 0x3000:
      return true;
    default:
      return false;
  }
}

std::size_t token_count(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = decode_utf8(text, pos);
    if (is_unicode_space(cp)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

}  // namespace interpeval
