#ifndef INTERPEVAL_TEXT_HPP_
#define INTERPEVAL_TEXT_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace interpeval {

// Canonical text normalization applied to every source/target segment on
// load: Unicode NFC, line breaks and tabs replaced by a single space, other
// control characters removed. Casing and punctuation are left untouched so
// scoring backends see near-raw text.
std::string normalize_text(std::string_view text);

// True for the Unicode whitespace code points used as token separators
// (ASCII whitespace, NBSP, the general-punctuation spaces, line/paragraph
// separators, NNBSP, MMSP, ideographic space, NEL).
bool is_unicode_space(char32_t cp);

// Number of maximal whitespace-delimited runs. Empty or all-whitespace
// input counts zero tokens.
std::size_t token_count(std::string_view text);

}  // namespace interpeval

#endif  // INTERPEVAL_TEXT_HPP_
