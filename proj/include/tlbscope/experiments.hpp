#pragma once

#include "tlbscope/model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace tlbscope {

enum class SweepMode { kGlobal, kNaiveHalf, kGroupAligned };

// Total throughput as a function of accessed-region size, one experiment
// mode per curve.
struct SweepCurve {
  SweepMode mode = SweepMode::kGlobal;
  std::vector<std::pair<std::uint64_t, double>> points;  // (bytes, bytes/s)
};

// Solo-throughput vector plus symmetric pair-throughput matrix from the
// two-SM probing runs; pairs(i, i) == solo(i). All values bytes/s.
struct ProbeData {
  Eigen::VectorXd solo;
  Eigen::MatrixXd pairs;
};

// All SMs active over a region of each given size. kGlobal points every
// SM at [0, size); kNaiveHalf splits [0, size) in half and assigns each
// SM a seed-random half; kGroupAligned pins each whole group to one chunk
// of a placement over [0, size). Sizes must be page-aligned and within
// memory. Returns total throughput per size.
SweepCurve sweep(const MachineConfig& config,
                 const std::vector<std::uint64_t>& sizes, SweepMode mode,
                 std::uint64_t seed);

// The default size grid: 8 GiB steps up to 64 GiB, then a denser tail to
// resolve the post-reach cliff, clipped to the config's memory size.
std::vector<std::uint64_t> default_sweep_sizes(const MachineConfig& config);

// Solo run per SM and one run per unordered SM pair, all sharing a
// 40 GiB probe window at offset 0 (clipped to memory and reach so TLB
// effects never contaminate the probe). Cells are independent pure
// simulations and run in parallel; TLBSCOPE_THREADS caps the thread
// count. Output is identical for every thread count.
ProbeData probe_pairs(const MachineConfig& config);

// Throughput of each group running alone on the probe window.
Eigen::VectorXd single_groups(const MachineConfig& config);

// Throughput of each unordered group pair, the two groups windowed on
// disjoint probe regions; diagonal holds the single_groups values.
Eigen::MatrixXd group_pairs(const MachineConfig& config);

}  // namespace tlbscope
