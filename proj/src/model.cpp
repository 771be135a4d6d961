#include "tlbscope/model.hpp"

#include "tlbscope/rng.hpp"
#include "tlbscope/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tlbscope {

namespace {

int max_index_plus_one(const std::vector<int>& v) {
  int m = -1;
  for (int x : v) m = std::max(m, x);
  return m + 1;
}

}  // namespace

int MachineConfig::tpc_count() const { return max_index_plus_one(tpc_of); }

int MachineConfig::group_count() const { return max_index_plus_one(group_of); }

std::vector<int> MachineConfig::group_sizes() const {
  std::vector<int> sizes(group_count(), 0);
  for (int g : group_of)
    if (g >= 0) ++sizes[g];
  return sizes;
}

std::vector<std::vector<int>> MachineConfig::groups() const {
  std::vector<std::vector<int>> members(group_count());
  for (int sm = 0; sm < sm_count; ++sm)
    if (group_of[sm] >= 0) members[group_of[sm]].push_back(sm);
  return members;
}

MachineConfig default_a100() {
  MachineConfig c;
  c.sm_count = 108;
  c.tpc_of.resize(c.sm_count);
  c.group_of.resize(c.sm_count);
  for (int sm = 0; sm < c.sm_count; ++sm) {
    c.tpc_of[sm] = sm / 2;
    // 12 groups of 8 SMs (4 TPCs each), then 2 groups of 6 (3 TPCs each).
    c.group_of[sm] = sm < 96 ? sm / 8 : 12 + (sm - 96) / 6;
  }
  c.sm_rate = 70 * kGBps;
  c.tpc_cap = 80 * kGBps;
  c.group_cap_per_sm = 15 * kGBps;
  c.device_cap = kUnbounded;
  c.tlb_reach = 64 * kGiB;
  c.page_size = 2 * kMiB;
  c.memory_size = 80 * kGiB;
  c.miss_factor = 50.0;
  return c;
}

MachineConfig shuffled_layout(const MachineConfig& config, std::uint64_t seed) {
  MachineConfig out = config;
  const int tpcs = config.tpc_count();
  const int groups = config.group_count();
  if (tpcs == 0 || groups == 0) return out;

  // Group of each TPC and the per-group TPC counts to preserve.
  std::vector<int> tpc_group(tpcs, -1);
  for (int sm = 0; sm < config.sm_count; ++sm) tpc_group[config.tpc_of[sm]] = config.group_of[sm];
  std::vector<int> tpcs_per_group(groups, 0);
  for (int t = 0; t < tpcs; ++t)
    if (tpc_group[t] >= 0) ++tpcs_per_group[tpc_group[t]];

  std::vector<int> order(tpcs);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  for (int i = tpcs - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  // Deal the shuffled TPCs back into groups of the original sizes.
  std::vector<int> new_group_of_tpc(tpcs, -1);
  std::size_t cursor = 0;
  for (int g = 0; g < groups; ++g)
    for (int k = 0; k < tpcs_per_group[g]; ++k) new_group_of_tpc[order[cursor++]] = g;

  for (int sm = 0; sm < config.sm_count; ++sm)
    out.group_of[sm] = new_group_of_tpc[config.tpc_of[sm]];
  return out;
}

std::vector<std::string> validate(const MachineConfig& c) {
  std::vector<std::string> bad;
  const auto complain = [&bad](std::string msg) { bad.push_back(std::move(msg)); };

  if (c.sm_count <= 0) complain("sm_count must be positive");
  if (static_cast<int>(c.tpc_of.size()) != c.sm_count) complain("tpc_of must map every SM");
  if (static_cast<int>(c.group_of.size()) != c.sm_count) complain("group_of must map every SM");

  bool indices_ok = true;
  for (std::size_t i = 0; i < c.tpc_of.size() && i < c.group_of.size(); ++i) {
    if (c.tpc_of[i] < 0 || c.group_of[i] < 0) {
      complain("sm " + std::to_string(i) + ": negative TPC or group index");
      indices_ok = false;
    }
  }

  if (indices_ok && static_cast<int>(c.tpc_of.size()) == c.sm_count &&
      static_cast<int>(c.group_of.size()) == c.sm_count && c.sm_count > 0) {
    std::vector<int> tpc_size(c.tpc_count(), 0);
    std::vector<int> tpc_group(c.tpc_count(), -1);
    for (int sm = 0; sm < c.sm_count; ++sm) {
      const int t = c.tpc_of[sm];
      ++tpc_size[t];
      if (tpc_group[t] == -1) {
        tpc_group[t] = c.group_of[sm];
      } else if (tpc_group[t] != c.group_of[sm]) {
        complain("TPC " + std::to_string(t) + " straddles groups");
      }
    }
    for (int t = 0; t < c.tpc_count(); ++t)
      if (tpc_size[t] != 0 && tpc_size[t] != 2)
        complain("TPC size != 2: TPC " + std::to_string(t) + " has " +
                 std::to_string(tpc_size[t]) + " SMs");
    const std::vector<int> sizes = c.group_sizes();
    for (int g = 0; g < static_cast<int>(sizes.size()); ++g) {
      const int size = sizes[g];
      if (size != 0 && (size < 2 || size % 2 != 0))
        complain("group " + std::to_string(g) + " size " + std::to_string(size) +
                 " is not an even count >= 2");
    }
  }

  if (!(c.sm_rate > 0)) complain("sm_rate must be positive");
  if (!(c.tpc_cap > 0)) complain("tpc_cap must be positive");
  if (!(c.group_cap_per_sm > 0)) complain("group_cap_per_sm must be positive");
  if (!(c.device_cap > 0)) complain("device_cap must be positive or unbounded");
  if (!(c.miss_factor >= 1.0)) complain("miss_factor < 1");
  if (c.page_size == 0) complain("page_size must be positive");
  if (c.tlb_reach == 0 || (c.page_size != 0 && c.tlb_reach % c.page_size != 0))
    complain("tlb_reach must be a positive multiple of page_size");
  if (c.memory_size == 0 || (c.page_size != 0 && c.memory_size % c.page_size != 0))
    complain("memory_size must be a positive multiple of page_size");

  return bad;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t size_field(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_string()) return parse_size(v.get<std::string>());
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw std::invalid_argument("config field '" + key + "' must be a byte count or suffixed size string");
}

double rate_field(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument("config field '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::string write_config_json(const MachineConfig& c) {
  ordered_json j;
  j["sm_count"] = c.sm_count;
  j["tpc_of"] = c.tpc_of;
  j["group_of"] = c.group_of;
  j["sm_rate"] = c.sm_rate;
  j["tpc_cap"] = c.tpc_cap;
  j["group_cap_per_sm"] = c.group_cap_per_sm;
  if (std::isinf(c.device_cap))
    j["device_cap"] = "unbounded";
  else
    j["device_cap"] = c.device_cap;
  j["tlb_reach"] = c.tlb_reach;
  j["page_size"] = c.page_size;
  j["memory_size"] = c.memory_size;
  j["miss_factor"] = c.miss_factor;
  return j.dump(2) + "\n";
}

MachineConfig parse_config_json(const std::string& text) {
  static const std::vector<std::string> known = {
      "sm_count",   "tpc_of",    "group_of",    "sm_rate",
      "tpc_cap",    "group_cap_per_sm",         "device_cap",
      "tlb_reach",  "page_size", "memory_size", "miss_factor"};

  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw std::invalid_argument("unknown config field: " + item.key());
  for (const auto& key : known)
    if (!j.contains(key)) throw std::invalid_argument("missing config field: " + key);

  MachineConfig c;
  c.sm_count = j.at("sm_count").get<int>();
  c.tpc_of = j.at("tpc_of").get<std::vector<int>>();
  c.group_of = j.at("group_of").get<std::vector<int>>();
  c.sm_rate = rate_field(j, "sm_rate");
  c.tpc_cap = rate_field(j, "tpc_cap");
  c.group_cap_per_sm = rate_field(j, "group_cap_per_sm");
  const json& cap = j.at("device_cap");
  if (cap.is_null() || (cap.is_string() && cap.get<std::string>() == "unbounded"))
    c.device_cap = kUnbounded;
  else
    c.device_cap = rate_field(j, "device_cap");
  c.tlb_reach = size_field(j, "tlb_reach");
  c.page_size = size_field(j, "page_size");
  c.memory_size = size_field(j, "memory_size");
  c.miss_factor = rate_field(j, "miss_factor");
  return c;
}

}  // namespace tlbscope
