#include "tlbscope/simulate.hpp"

#include "tlbscope/rng.hpp"

#include <algorithm>
#include <list>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tlbscope {

namespace {

using Interval = std::pair<std::uint64_t, std::uint64_t>;  // [begin, end)

std::uint64_t merged_bytes(std::vector<Interval>& intervals) {
  if (intervals.empty()) return 0;
  std::sort(intervals.begin(), intervals.end());
  std::uint64_t total = 0;
  std::uint64_t begin = intervals[0].first;
  std::uint64_t end = intervals[0].second;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].first > end) {
      total += end - begin;
      begin = intervals[i].first;
      end = intervals[i].second;
    } else {
      end = std::max(end, intervals[i].second);
    }
  }
  return total + (end - begin);
}

const Window& checked_window(const AccessPlan& plan, int sm, const MachineConfig& config) {
  if (sm < 0 || sm >= config.sm_count)
    throw std::invalid_argument("sm " + std::to_string(sm) + ": index out of range");
  const auto it = plan.windows.find(sm);
  if (it == plan.windows.end())
    throw std::invalid_argument("sm " + std::to_string(sm) + ": active but has no window");
  const Window& w = it->second;
  if (w.length == 0)
    throw std::invalid_argument("sm " + std::to_string(sm) + ": window is empty");
  if (w.offset % config.page_size != 0 || w.length % config.page_size != 0)
    throw std::invalid_argument("sm " + std::to_string(sm) + ": window is not page-aligned");
  if (w.offset > config.memory_size || w.length > config.memory_size - w.offset)
    throw std::invalid_argument("sm " + std::to_string(sm) + ": window exceeds memory size");
  return w;
}

}  // namespace

std::uint64_t union_pages(const AccessPlan& plan, int group, const MachineConfig& config) {
  std::vector<Interval> intervals;
  for (int sm : plan.active) {
    if (sm < 0 || sm >= config.sm_count)
      throw std::invalid_argument("sm " + std::to_string(sm) + ": index out of range");
    if (config.group_of[sm] != group) continue;
    const Window& w = checked_window(plan, sm, config);
    intervals.emplace_back(w.offset, w.end());
  }
  return merged_bytes(intervals) / config.page_size;
}

double hit_rate(std::uint64_t union_bytes, std::uint64_t reach) {
  if (union_bytes == 0) return 1.0;
  return std::min(1.0, static_cast<double>(reach) / static_cast<double>(union_bytes));
}

double slowdown(double hit_fraction, double miss_factor) {
  return 1.0 / (hit_fraction + (1.0 - hit_fraction) * miss_factor);
}

ThroughputReport simulate_throughput(const MachineConfig& config, const AccessPlan& plan) {
  const int n = config.sm_count;
  const int tpcs = config.tpc_count();
  const int groups = config.group_count();

  // Group working sets: union of the active members' windows.
  std::vector<std::vector<Interval>> group_windows(groups);
  for (int sm : plan.active) {
    const Window& w = checked_window(plan, sm, config);
    group_windows[config.group_of[sm]].emplace_back(w.offset, w.end());
  }

  std::vector<double> group_slow(groups, 0.0);
  for (int g = 0; g < groups; ++g) {
    const std::uint64_t union_bytes = merged_bytes(group_windows[g]);
    group_slow[g] = slowdown(hit_rate(union_bytes, config.tlb_reach), config.miss_factor);
  }

  // SM demand, throttled by its group's TLB behaviour.
  Eigen::VectorXd demand = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd tpc_demand = Eigen::VectorXd::Zero(tpcs);
  for (int sm : plan.active) {
    demand[sm] = config.sm_rate * group_slow[config.group_of[sm]];
    tpc_demand[config.tpc_of[sm]] += demand[sm];
  }

  // TPC level, then group level, then device level. Each level delivers
  // min(demand, cap) and scales its inputs pro-rata when the cap binds.
  std::vector<int> tpc_group(tpcs, -1);
  for (int sm = 0; sm < n; ++sm) tpc_group[config.tpc_of[sm]] = config.group_of[sm];

  Eigen::VectorXd tpc_deliver(tpcs);
  Eigen::VectorXd tpc_scale(tpcs);
  Eigen::VectorXd group_demand = Eigen::VectorXd::Zero(groups);
  for (int t = 0; t < tpcs; ++t) {
    tpc_deliver[t] = std::min(tpc_demand[t], config.tpc_cap);
    tpc_scale[t] = tpc_demand[t] > 0 ? tpc_deliver[t] / tpc_demand[t] : 0.0;
    if (tpc_group[t] >= 0) group_demand[tpc_group[t]] += tpc_deliver[t];
  }

  const std::vector<int> group_size = config.group_sizes();
  Eigen::VectorXd group_deliver(groups);
  Eigen::VectorXd group_scale(groups);
  double device_demand = 0;
  for (int g = 0; g < groups; ++g) {
    const double cap = config.group_cap_per_sm * group_size[g];
    group_deliver[g] = std::min(group_demand[g], cap);
    group_scale[g] = group_demand[g] > 0 ? group_deliver[g] / group_demand[g] : 0.0;
    device_demand += group_deliver[g];
  }

  const double total = std::min(device_demand, config.device_cap);
  const double device_scale = device_demand > 0 ? total / device_demand : 0.0;

  ThroughputReport report;
  report.per_sm = Eigen::VectorXd::Zero(n);
  for (int sm : plan.active)
    report.per_sm[sm] = demand[sm] * tpc_scale[config.tpc_of[sm]] *
                        group_scale[config.group_of[sm]] * device_scale;
  report.per_group = group_deliver * device_scale;
  report.total = total;
  return report;
}

double simulate_tlb_trace(std::uint64_t num_pages, std::uint64_t capacity,
                          std::uint64_t num_accesses, std::uint64_t seed) {
  if (num_pages == 0 || capacity == 0 || num_accesses == 0)
    throw std::invalid_argument("simulate_tlb_trace: all counts must be positive");

  const std::uint64_t ten_caps =
      capacity > num_accesses / 10 ? num_accesses : 10 * capacity;
  const std::uint64_t warmup = std::min(ten_caps, num_accesses / 2);

  std::list<std::uint64_t> lru;  // front = most recently used
  std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> resident;
  resident.reserve(std::min(num_pages, capacity));

  SplitMix64 rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < num_accesses; ++t) {
    const std::uint64_t page = rng.below(num_pages);
    const auto it = resident.find(page);
    if (it != resident.end()) {
      lru.splice(lru.begin(), lru, it->second);
      if (t >= warmup) ++hits;
    } else {
      if (resident.size() == capacity) {
        resident.erase(lru.back());
        lru.pop_back();
      }
      lru.push_front(page);
      resident[page] = lru.begin();
    }
  }
  return static_cast<double>(hits) / static_cast<double>(num_accesses - warmup);
}

}  // namespace tlbscope
