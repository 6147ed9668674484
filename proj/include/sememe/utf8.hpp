#ifndef SEMEME_UTF8_HPP
#define SEMEME_UTF8_HPP

#include <string>
#include <string_view>
#include <vector>

namespace sememe {

/// Splits a UTF-8 string into its Unicode scalar values, each returned as its
/// own UTF-8 encoded string. Throws Error(MalformedLine) on invalid UTF-8.
std::vector<std::string> split_characters(std::string_view word);

/// Decodes one scalar value; `text` must hold exactly one encoded character.
char32_t decode_scalar(std::string_view text);

}  // namespace sememe

#endif  // SEMEME_UTF8_HPP
