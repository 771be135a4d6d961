#pragma once

#include "tlbscope/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tlbscope {

// Chunked memory layout and group-to-chunk assignment. Chunks are
// disjoint page-aligned windows covering [0, memory_size), each no larger
// than the TLB reach.
struct PlacementPlan {
  std::vector<Window> chunks;
  std::vector<int> assignment;  // group index -> chunk index
};

// Splits memory into ceil(memory_size / tlb_reach) equal page-aligned
// chunks (the last takes the remainder) and assigns groups to chunks by
// greedy descending-weight balancing of the per-chunk weight sums.
// Weights default to SM counts when absent. Ties break toward the lower
// chunk index. Throws std::invalid_argument when there are fewer groups
// than chunks.
PlacementPlan make_placement(const std::vector<std::vector<int>>& groups,
                             std::uint64_t memory_size,
                             std::uint64_t tlb_reach, std::uint64_t page_size,
                             const std::vector<double>& weights = {});

// Every SM active, windowed on its group's chunk.
AccessPlan to_access_plan(const PlacementPlan& placement,
                          const MachineConfig& config);

// Returns every violated PlacementPlan invariant (chunk geometry, cover,
// assignment completeness, per-group union within reach); empty when ok.
std::vector<std::string> verify(const PlacementPlan& placement,
                                const MachineConfig& config);

// {"chunks": [{"offset": ..., "length": ...}, ...], "assignment": {...}}
std::string write_placement_json(const PlacementPlan& placement);
PlacementPlan parse_placement_json(const std::string& text);

}  // namespace tlbscope
