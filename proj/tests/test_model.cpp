#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlbscope/model.hpp"
#include "tlbscope/units.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <map>

using namespace tlbscope;
using tlbscope::testing::contains;
using tlbscope::testing::message_of;

namespace {

std::map<int, int> group_size_histogram(const MachineConfig& c) {
  std::map<int, int> histogram;
  for (int size : c.group_sizes()) ++histogram[size];
  return histogram;
}

}  // namespace

TEST_CASE("default A100 layout") {
  const MachineConfig c = default_a100();
  CHECK(c.sm_count == 108);
  CHECK(c.tpc_count() == 54);
  CHECK(c.group_count() == 14);

  // TPC pairs have consecutive indices.
  for (int sm = 0; sm < c.sm_count; ++sm) CHECK(c.tpc_of[sm] == sm / 2);

  const std::map<int, int> histogram = group_size_histogram(c);
  CHECK(histogram == std::map<int, int>{{8, 12}, {6, 2}});

  CHECK(c.tlb_reach == 64 * kGiB);
  CHECK(c.memory_size == 80 * kGiB);
  CHECK(c.page_size == 2 * kMiB);
  CHECK(c.sm_rate == 70e9);
  CHECK(c.tpc_cap == 80e9);
  CHECK(c.group_cap_per_sm == 15e9);
  CHECK(c.device_cap == kUnbounded);
  CHECK(c.miss_factor == 50.0);

  CHECK(validate(c).empty());
}

TEST_CASE("shuffled_layout is deterministic and preserves structure") {
  const MachineConfig base = default_a100();

  const MachineConfig a = shuffled_layout(base, 0);
  const MachineConfig b = shuffled_layout(base, 0);
  CHECK(a.group_of == b.group_of);

  bool any_difference = false;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const MachineConfig s = shuffled_layout(base, seed);
    CHECK(s.sm_count == base.sm_count);
    CHECK(s.tpc_of == base.tpc_of);
    CHECK(group_size_histogram(s) == group_size_histogram(base));
    // TPC pairs stay intact.
    for (int sm = 0; sm < s.sm_count; sm += 2) CHECK(s.group_of[sm] == s.group_of[sm + 1]);
    CHECK(validate(s).empty());
    if (s.group_of != base.group_of) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("validate flags corrupted configs") {
  CHECK(validate(default_a100()).empty());

  MachineConfig three_sm_tpc = default_a100();
  three_sm_tpc.tpc_of[4] = 0;  // TPC 0 now has 3 SMs, TPC 2 only 1
  const auto tpc_violations = validate(three_sm_tpc);
  REQUIRE(!tpc_violations.empty());
  CHECK(std::any_of(tpc_violations.begin(), tpc_violations.end(),
                    [](const std::string& v) { return contains(v, "TPC size != 2"); }));

  MachineConfig bad_miss = default_a100();
  bad_miss.miss_factor = 0.5;
  const auto miss_violations = validate(bad_miss);
  REQUIRE(miss_violations.size() == 1);
  CHECK(contains(miss_violations[0], "miss_factor < 1"));

  MachineConfig straddle = default_a100();
  straddle.group_of[7] = 1;  // SM 6 and 7 share TPC 3 but not a group
  CHECK(!validate(straddle).empty());

  MachineConfig odd_group = default_a100();
  odd_group.group_of[95] = 12;  // group 11 -> 7 SMs, group 12 -> 7 SMs
  CHECK(!validate(odd_group).empty());

  MachineConfig unaligned_reach = default_a100();
  unaligned_reach.tlb_reach = 64 * kGiB + 1;
  CHECK(!validate(unaligned_reach).empty());

  MachineConfig unaligned_memory = default_a100();
  unaligned_memory.memory_size = 80 * kGiB + 3;
  CHECK(!validate(unaligned_memory).empty());

  MachineConfig bad_rate = default_a100();
  bad_rate.sm_rate = 0;
  CHECK(!validate(bad_rate).empty());

  MachineConfig bad_cap = default_a100();
  bad_cap.tpc_cap = -1;
  CHECK(!validate(bad_cap).empty());

  MachineConfig short_map = default_a100();
  short_map.group_of.pop_back();
  CHECK(!validate(short_map).empty());
}

TEST_CASE("config JSON round trip") {
  const MachineConfig c = default_a100();
  const MachineConfig back = parse_config_json(write_config_json(c));
  CHECK(back.sm_count == c.sm_count);
  CHECK(back.tpc_of == c.tpc_of);
  CHECK(back.group_of == c.group_of);
  CHECK(back.sm_rate == c.sm_rate);
  CHECK(back.tpc_cap == c.tpc_cap);
  CHECK(back.group_cap_per_sm == c.group_cap_per_sm);
  CHECK(back.device_cap == c.device_cap);
  CHECK(back.tlb_reach == c.tlb_reach);
  CHECK(back.page_size == c.page_size);
  CHECK(back.memory_size == c.memory_size);
  CHECK(back.miss_factor == c.miss_factor);
}

TEST_CASE("config JSON accepts suffixed sizes and bounded device cap") {
  std::string text = write_config_json(default_a100());
  const std::string needle = "\"tlb_reach\": 68719476736";
  REQUIRE(text.find(needle) != std::string::npos);
  text.replace(text.find(needle), needle.size(), "\"tlb_reach\": \"64GiB\"");
  CHECK(parse_config_json(text).tlb_reach == 64 * kGiB);

  MachineConfig capped = default_a100();
  capped.device_cap = 500e9;
  CHECK(parse_config_json(write_config_json(capped)).device_cap == 500e9);
}

TEST_CASE("config JSON rejects unknown and missing fields") {
  std::string text = write_config_json(default_a100());
  text.insert(text.find("\"sm_count\""), "\"smcount\": 1,\n  ");
  CHECK(contains(message_of([&] { parse_config_json(text); }), "unknown config field"));

  CHECK(contains(message_of([] { parse_config_json("{\"sm_count\": 4}"); }),
                 "missing config field"));
}

TEST_CASE("size parsing") {
  CHECK(parse_size("64GiB") == 68719476736ull);
  CHECK(parse_size("2MiB") == 2097152ull);
  CHECK(parse_size("1KiB") == 1024ull);
  CHECK(parse_size("1TiB") == (1ull << 40));
  CHECK(parse_size("123") == 123ull);
  CHECK(parse_size("123B") == 123ull);
  CHECK(parse_size(" 40GiB ") == 40 * kGiB);
  CHECK(parse_size_list("40GiB,80GiB") == std::vector<std::uint64_t>{40 * kGiB, 80 * kGiB});

  CHECK_THROWS_AS(parse_size("40GB"), std::invalid_argument);
  CHECK_THROWS_AS(parse_size("GiB"), std::invalid_argument);
  CHECK_THROWS_AS(parse_size(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_size("999999999999999999999"), std::invalid_argument);
  CHECK_THROWS_AS(parse_size("100000000TiB"), std::invalid_argument);

  CHECK(format_gbps(120e9) == "120.000000");
  CHECK(format_gbps(70e9 / 10.8 * 108) == "700.000000");
}
