#pragma once

#include "tlbscope/model.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace tlbscope::testing {

// Canonical form for comparing partitions regardless of labeling.
inline std::set<std::set<int>> as_sets(const std::vector<std::vector<int>>& groups) {
  std::set<std::set<int>> out;
  for (const auto& g : groups) out.insert(std::set<int>(g.begin(), g.end()));
  return out;
}

inline std::set<std::set<int>> partition_from_labels(const std::vector<int>& label_of) {
  std::vector<std::vector<int>> groups;
  for (std::size_t sm = 0; sm < label_of.size(); ++sm) {
    const int g = label_of[sm];
    if (g >= static_cast<int>(groups.size())) groups.resize(g + 1);
    groups[g].push_back(static_cast<int>(sm));
  }
  return as_sets(groups);
}

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

template <typename Fn>
std::string message_of(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace tlbscope::testing
