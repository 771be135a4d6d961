#pragma once

#include "tlbscope/experiments.hpp"

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlbscope {

// Raised when measurements carry no usable structure (distinct from bad
// input files or flags).
struct analysis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Partition recovered from probe data plus a quality figure: the fraction
// of intra-group pairs whose throughput dip was NOT detected (0 when every
// group is a clean clique).
struct GroupRecovery {
  std::vector<std::vector<int>> groups;  // ordered by smallest member
  double clique_deficiency = 0;
};

// Recovered machine structure: the group partition, the TPC matching and
// a display permutation that makes the pair matrix block-diagonal.
// Groups are ordered by (size descending, smallest member ascending);
// the permutation keeps same-group SMs contiguous and TPC partners
// adjacent.
struct Topology {
  std::vector<std::vector<int>> groups;
  std::vector<std::array<int, 2>> tpcs;
  std::vector<int> permutation;  // SM index -> display position
};

// Two SMs share a resource group when their pair throughput dips below
// (1 - delta) times the sum of their solo throughputs; groups are the
// connected components of that graph. Scale-free, so it applies equally
// to simulated and measured matrices. Throws analysis_error
// ("no shared-resource signal") when no pair dips at all.
GroupRecovery recover_groups(const ProbeData& probe, double delta = 0.05);

// Within each group, an SM's TPC partner is its weakest pair; the
// matching must be mutual. Throws analysis_error ("ambiguous TPC
// structure") naming the SMs when it is not.
std::vector<std::array<int, 2>> recover_tpcs(
    const ProbeData& probe, const std::vector<std::vector<int>>& groups);

// Assembles a Topology, deriving the display permutation. Validates that
// groups partition [0, sm_count) and that every TPC pair lies inside one
// group.
Topology make_topology(std::vector<std::vector<int>> groups,
                       std::vector<std::array<int, 2>> tpcs, int sm_count);

// Conjugates the matrix by the display permutation:
// result(p[i], p[j]) = matrix(i, j).
Eigen::MatrixXd reorder(const Eigen::MatrixXd& matrix, const Topology& topology);

// {"groups": [[sm, ...], ...], "tpcs": [[a, b], ...], "permutation": [...]}
std::string write_topology_json(const Topology& topology);
Topology parse_topology_json(const std::string& text);

}  // namespace tlbscope
