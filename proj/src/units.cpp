#include "tlbscope/units.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace tlbscope {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t suffix_multiplier(std::string_view suffix) {
  if (suffix.empty() || suffix == "B") return 1;
  if (suffix == "KiB") return kKiB;
  if (suffix == "MiB") return kMiB;
  if (suffix == "GiB") return kGiB;
  if (suffix == "TiB") return kTiB;
  throw std::invalid_argument("unrecognized size suffix '" + std::string(suffix) + "'");
}

}  // namespace

std::uint64_t parse_size(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty size");

  std::size_t digits = 0;
  while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
  if (digits == 0) throw std::invalid_argument("size must start with digits: '" + std::string(s) + "'");

  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + digits, value);
  if (ec != std::errc{} || ptr != s.data() + digits)
    throw std::invalid_argument("bad size value: '" + std::string(s) + "'");

  const std::uint64_t mult = suffix_multiplier(trim(s.substr(digits)));
  if (mult != 0 && value > std::numeric_limits<std::uint64_t>::max() / mult)
    throw std::invalid_argument("size overflows 64 bits: '" + std::string(s) + "'");
  return value * mult;
}

std::vector<std::uint64_t> parse_size_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_size(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty size list");
  return out;
}

std::string format_gbps(double bytes_per_sec) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", bytes_per_sec / kGBps);
  return buf;
}

}  // namespace tlbscope
