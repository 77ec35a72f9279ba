#ifndef DIACRIT_UTF8_HPP
#define DIACRIT_UTF8_HPP

#include <string>
#include <string_view>

namespace diacrit::utf8 {

/// Decodes UTF-8 into code points. Invalid bytes become U+FFFD; decoding
/// never throws, so junk lines in web corpora flow through as junk tokens.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
std::string encode(char32_t c);

}  // namespace diacrit::utf8

#endif  // DIACRIT_UTF8_HPP
