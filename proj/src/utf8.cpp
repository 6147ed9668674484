#include "sememe/utf8.hpp"

#include "sememe/error.hpp"

namespace sememe {

namespace {

// Returns the encoded length of the scalar starting at text[pos] and writes
// the decoded value, or 0 if the sequence is invalid.
std::size_t decode_at(std::string_view text, std::size_t pos, char32_t& out) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t len = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    out = lead;
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto cont = static_cast<unsigned char>(text[pos + i]);
    if ((cont & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (cont & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  out = cp;
  return len;
}

}  // namespace

std::vector<std::string> split_characters(std::string_view word) {
  std::vector<std::string> chars;
  std::size_t pos = 0;
  while (pos < word.size()) {
    char32_t cp;
    const std::size_t len = decode_at(word, pos, cp);
    if (len == 0) {
      throw Error(Errc::MalformedLine, "invalid UTF-8 in '" + std::string(word) + "'");
    }
    chars.emplace_back(word.substr(pos, len));
    pos += len;
  }
  return chars;
}

char32_t decode_scalar(std::string_view text) {
  char32_t cp = 0;
  if (text.empty() || decode_at(text, 0, cp) != text.size()) {
    throw Error(Errc::MalformedLine, "expected a single character, got '" + std::string(text) + "'");
  }
  return cp;
}

}  // namespace sememe
