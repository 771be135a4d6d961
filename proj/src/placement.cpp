#include "tlbscope/placement.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tlbscope {

PlacementPlan make_placement(const std::vector<std::vector<int>>& groups,
                             std::uint64_t memory_size, std::uint64_t tlb_reach,
                             std::uint64_t page_size,
                             const std::vector<double>& weights) {
  if (page_size == 0) throw std::invalid_argument("page_size must be positive");
  if (memory_size == 0 || memory_size % page_size != 0)
    throw std::invalid_argument("memory_size must be a positive multiple of page_size");
  if (tlb_reach == 0 || tlb_reach % page_size != 0)
    throw std::invalid_argument("tlb_reach must be a positive multiple of page_size");
  if (groups.empty()) throw std::invalid_argument("need at least one group");
  if (!weights.empty() && weights.size() != groups.size())
    throw std::invalid_argument("weights must match group count");

  const std::uint64_t chunk_count = (memory_size + tlb_reach - 1) / tlb_reach;
  if (chunk_count > groups.size())
    throw std::invalid_argument("insufficient groups to cover chunks");

  // Equal page-aligned chunks; the last one takes the remainder.
  const std::uint64_t raw = (memory_size + chunk_count - 1) / chunk_count;
  const std::uint64_t chunk_bytes = ((raw + page_size - 1) / page_size) * page_size;

  PlacementPlan plan;
  for (std::uint64_t offset = 0; offset < memory_size; offset += chunk_bytes)
    plan.chunks.push_back({offset, std::min(chunk_bytes, memory_size - offset)});

  // Greedy balancing: heaviest group first into the lightest chunk.
  std::vector<double> weight(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g)
    weight[g] = weights.empty() ? static_cast<double>(groups[g].size()) : weights[g];

  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&weight](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });

  std::vector<double> load(plan.chunks.size(), 0.0);
  plan.assignment.assign(groups.size(), 0);
  for (std::size_t g : order) {
    std::size_t lightest = 0;
    for (std::size_t c = 1; c < load.size(); ++c)
      if (load[c] < load[lightest]) lightest = c;
    plan.assignment[g] = static_cast<int>(lightest);
    load[lightest] += weight[g];
  }
  return plan;
}

AccessPlan to_access_plan(const PlacementPlan& placement, const MachineConfig& config) {
  if (static_cast<int>(placement.assignment.size()) != config.group_count())
    throw std::invalid_argument("placement does not assign exactly the config's groups");
  AccessPlan plan;
  for (int sm = 0; sm < config.sm_count; ++sm) {
    const int g = config.group_of[sm];
    if (g < 0 || g >= static_cast<int>(placement.assignment.size()))
      throw std::invalid_argument("group " + std::to_string(g) + " in placement unknown to config");
    const int chunk = placement.assignment[g];
    if (chunk < 0 || chunk >= static_cast<int>(placement.chunks.size()))
      throw std::invalid_argument("group " + std::to_string(g) + " assigned to missing chunk");
    plan.windows[sm] = placement.chunks[chunk];
    plan.active.insert(sm);
  }
  return plan;
}

std::vector<std::string> verify(const PlacementPlan& placement, const MachineConfig& config) {
  std::vector<std::string> bad;
  const auto complain = [&bad](std::string msg) { bad.push_back(std::move(msg)); };

  if (placement.chunks.empty()) complain("no chunks");

  bool geometry_ok = true;
  for (std::size_t c = 0; c < placement.chunks.size(); ++c) {
    const Window& w = placement.chunks[c];
    if (w.length == 0) {
      complain("chunk " + std::to_string(c) + " is empty");
      geometry_ok = false;
    }
    if (config.page_size != 0 &&
        (w.offset % config.page_size != 0 || w.length % config.page_size != 0)) {
      complain("chunk " + std::to_string(c) + " is not page-aligned");
      geometry_ok = false;
    }
    if (w.length > config.tlb_reach)
      complain("chunk " + std::to_string(c) + " exceeds tlb_reach");
  }

  if (geometry_ok && !placement.chunks.empty()) {
    std::vector<Window> sorted = placement.chunks;
    std::sort(sorted.begin(), sorted.end(),
              [](const Window& a, const Window& b) { return a.offset < b.offset; });
    if (sorted.front().offset != 0) complain("chunks do not start at offset 0");
    for (std::size_t c = 1; c < sorted.size(); ++c) {
      if (sorted[c].offset < sorted[c - 1].end()) complain("chunks overlap");
      if (sorted[c].offset > sorted[c - 1].end()) complain("gap between chunks");
    }
    if (sorted.back().end() != config.memory_size) complain("chunks do not cover all of memory");
  }

  const int groups = config.group_count();
  if (static_cast<int>(placement.assignment.size()) < groups) {
    for (int g = static_cast<int>(placement.assignment.size()); g < groups; ++g)
      complain("unassigned group " + std::to_string(g));
  } else if (static_cast<int>(placement.assignment.size()) > groups) {
    complain("assignment names more groups than the config has");
  }

  std::vector<int> groups_per_chunk(placement.chunks.size(), 0);
  for (std::size_t g = 0; g < placement.assignment.size(); ++g) {
    const int chunk = placement.assignment[g];
    if (chunk < 0 || chunk >= static_cast<int>(placement.chunks.size())) {
      complain("group " + std::to_string(g) + " assigned to missing chunk");
      continue;
    }
    ++groups_per_chunk[chunk];
    // All members share the chunk, so the group union is the chunk itself.
    if (placement.chunks[chunk].length > config.tlb_reach)
      complain("group " + std::to_string(g) + " union exceeds tlb_reach");
  }
  if (placement.assignment.size() >= placement.chunks.size())
    for (std::size_t c = 0; c < groups_per_chunk.size(); ++c)
      if (groups_per_chunk[c] == 0) complain("chunk " + std::to_string(c) + " has no group");

  return bad;
}

std::string write_placement_json(const PlacementPlan& placement) {
  nlohmann::ordered_json j;
  j["chunks"] = nlohmann::ordered_json::array();
  for (const Window& w : placement.chunks)
    j["chunks"].push_back({{"offset", w.offset}, {"length", w.length}});
  nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
  for (std::size_t g = 0; g < placement.assignment.size(); ++g)
    assignment[std::to_string(g)] = placement.assignment[g];
  j["assignment"] = std::move(assignment);
  return j.dump(2) + "\n";
}

PlacementPlan parse_placement_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PlacementPlan plan;
  for (const auto& c : j.at("chunks"))
    plan.chunks.push_back({c.at("offset").get<std::uint64_t>(), c.at("length").get<std::uint64_t>()});
  const auto& assignment = j.at("assignment");
  plan.assignment.assign(assignment.size(), 0);
  for (const auto& item : assignment.items()) {
    const std::size_t g = std::stoul(item.key());
    if (g >= plan.assignment.size()) plan.assignment.resize(g + 1, 0);
    plan.assignment[g] = item.value().get<int>();
  }
  return plan;
}

}  // namespace tlbscope
