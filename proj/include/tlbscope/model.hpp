#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tlbscope {

// Contiguous page-aligned byte range inside device memory.
struct Window {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;

  std::uint64_t end() const { return offset + length; }
  friend bool operator==(const Window&, const Window&) = default;
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Ground-truth hardware layout plus the calibration constants of the
// throughput model. Rates are bytes/second, sizes bytes. Every SM belongs
// to exactly one TPC (2 SMs each) and one resource group (even size, one
// TLB and one bandwidth cap per group); TPCs never straddle groups.
struct MachineConfig {
  int sm_count = 0;
  std::vector<int> tpc_of;    // SM index -> TPC index
  std::vector<int> group_of;  // SM index -> resource-group index
  double sm_rate = 0;           // max demand of one SM issuing coalesced random reads
  double tpc_cap = 0;           // shared cap per TPC
  double group_cap_per_sm = 0;  // group cap = group_cap_per_sm * group size
  double device_cap = kUnbounded;
  std::uint64_t tlb_reach = 0;  // bytes representable by one group's TLB
  std::uint64_t page_size = 0;
  std::uint64_t memory_size = 0;
  double miss_factor = 1.0;  // cost of a TLB miss relative to a hit, >= 1

  int tpc_count() const;
  int group_count() const;
  std::vector<int> group_sizes() const;          // SMs per group
  std::vector<std::vector<int>> groups() const;  // members per group, ascending
};

// Which SMs touch memory and where each one is allowed to roam.
// Inactive SMs contribute nothing; every active SM needs a window.
struct AccessPlan {
  std::map<int, Window> windows;
  std::set<int> active;
};

// Steady-state delivered bandwidth for one simulated run, bytes/s.
struct ThroughputReport {
  Eigen::VectorXd per_sm;     // zero for inactive SMs
  Eigen::VectorXd per_group;  // sums to total
  double total = 0;
};

// The A100 SXM4-80GB layout: 108 SMs in 54 consecutive-index TPC pairs,
// 14 groups (12 of 8 SMs, 2 of 6), 80 GiB of memory behind per-group
// 64 GiB TLBs, with the default calibration constants.
MachineConfig default_a100();

// Same machine, group membership permuted at TPC granularity. TPC pairs
// stay intact and the group-size multiset is preserved; deterministic in
// the seed. Models the card-to-card variation of the physical mapping.
MachineConfig shuffled_layout(const MachineConfig& config, std::uint64_t seed);

// Returns every violated MachineConfig invariant, empty when valid.
std::vector<std::string> validate(const MachineConfig& config);

// JSON document with exactly the field names above. Size fields accept
// raw integers or binary-suffixed strings ("64GiB"); device_cap accepts
// "unbounded". Unknown fields are rejected.
std::string write_config_json(const MachineConfig& config);
MachineConfig parse_config_json(const std::string& text);

}  // namespace tlbscope
