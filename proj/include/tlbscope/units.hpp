#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tlbscope {

inline constexpr std::uint64_t kKiB = std::uint64_t{1} << 10;
inline constexpr std::uint64_t kMiB = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kGiB = std::uint64_t{1} << 30;
inline constexpr std::uint64_t kTiB = std::uint64_t{1} << 40;

// All reported throughput figures use 1 GB/s = 1e9 bytes/s.
inline constexpr double kGBps = 1e9;

// Accepts a raw byte count ("2097152") or a binary-suffixed size
// ("64GiB", "2MiB"). Throws std::invalid_argument on anything else.
std::uint64_t parse_size(std::string_view text);

// Parses a comma-separated list of sizes ("40GiB,80GiB").
std::vector<std::uint64_t> parse_size_list(std::string_view text);

// Fixed 6-decimal rendering of bytes/s in GB/s, e.g. 120e9 -> "120.000000".
std::string format_gbps(double bytes_per_sec);

}  // namespace tlbscope
