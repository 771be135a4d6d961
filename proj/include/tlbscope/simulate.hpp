#pragma once

#include "tlbscope/model.hpp"

#include <cstdint>

namespace tlbscope {

// Distinct pages covered by the union of the windows of the group's
// active SMs; 0 when the group has no active member.
std::uint64_t union_pages(const AccessPlan& plan, int group,
                          const MachineConfig& config);

// Steady-state TLB hit fraction of a working set of union_bytes behind a
// TLB of the given reach: min(1, reach / union_bytes), 1 for an empty set.
double hit_rate(std::uint64_t union_bytes, std::uint64_t reach);

// Demand multiplier when a fraction h of accesses hit and a miss costs
// miss_factor times a hit: 1 / (h + (1 - h) * miss_factor).
double slowdown(double hit_fraction, double miss_factor);

// Analytic steady-state throughput of a plan under the hierarchical-cap
// model. Per group g, every active SM demands sm_rate * slowdown(h_g);
// each TPC delivers min(sum of member demands, tpc_cap); each group
// min(sum of TPC deliveries, group_cap_per_sm * group size); the device
// min(sum of group deliveries, device_cap). Every capped level is
// apportioned pro-rata to demand. Pure function of its inputs.
// Throws std::invalid_argument naming the SM on an invalid window.
ThroughputReport simulate_throughput(const MachineConfig& config,
                                     const AccessPlan& plan);

// Trace-level oracle for hit_rate: drives an LRU TLB of `capacity` page
// entries with uniform-random page IDs in [0, num_pages) from a seeded
// splitmix64 stream and returns the hit fraction measured after a warm-up
// of min(10 * capacity, num_accesses / 2) accesses.
double simulate_tlb_trace(std::uint64_t num_pages, std::uint64_t capacity,
                          std::uint64_t num_accesses, std::uint64_t seed);

}  // namespace tlbscope
