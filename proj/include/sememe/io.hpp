#ifndef SEMEME_IO_HPP
#define SEMEME_IO_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace sememe {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);
/// Fixed-point with `digits` decimals, for reports.
std::string format_fixed(double value, int digits);

/// Strict decimal parse of the whole token; nullopt-like failure via bool.
bool parse_real(std::string_view token, double& out);
bool parse_integer(std::string_view token, long long& out);

/// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_whitespace(std::string_view line);
std::vector<std::string_view> split_on(std::string_view line, char sep);
std::string_view trim(std::string_view text);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace sememe

#endif  // SEMEME_IO_HPP
