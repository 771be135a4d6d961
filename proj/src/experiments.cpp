#include "tlbscope/experiments.hpp"

#include "tlbscope/placement.hpp"
#include "tlbscope/rng.hpp"
#include "tlbscope/simulate.hpp"
#include "tlbscope/units.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tlbscope {

namespace {

int thread_count() {
  if (const char* env = std::getenv("TLBSCOPE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Each index writes only its own slot, so results do not depend on the
// thread count or schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

std::uint64_t page_floor(std::uint64_t bytes, std::uint64_t page) {
  return bytes / page * page;
}

// 40 GiB at offset 0, clipped so it always fits in memory and under the
// TLB reach, which keeps topology probing free of TLB effects.
std::uint64_t probe_window_bytes(const MachineConfig& config) {
  const std::uint64_t len = page_floor(
      std::min({40 * kGiB, config.memory_size, config.tlb_reach}), config.page_size);
  if (len == 0) throw std::invalid_argument("config too small for a probe window");
  return len;
}

AccessPlan shared_window_plan(const std::vector<int>& sms, Window window) {
  AccessPlan plan;
  for (int sm : sms) {
    plan.windows[sm] = window;
    plan.active.insert(sm);
  }
  return plan;
}

}  // namespace

std::vector<std::uint64_t> default_sweep_sizes(const MachineConfig& config) {
  std::vector<std::uint64_t> grid;
  for (std::uint64_t g : {8, 16, 24, 32, 40, 48, 56, 64, 66, 68, 72, 76, 80})
    if (g * kGiB <= config.memory_size) grid.push_back(g * kGiB);
  if (grid.empty()) grid.push_back(config.memory_size);
  return grid;
}

SweepCurve sweep(const MachineConfig& config, const std::vector<std::uint64_t>& sizes,
                 SweepMode mode, std::uint64_t seed) {
  SweepCurve curve;
  curve.mode = mode;
  curve.points.resize(sizes.size());

  std::vector<AccessPlan> plans(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::uint64_t size = sizes[i];
    if (size == 0 || size % config.page_size != 0)
      throw std::invalid_argument("size not page-aligned: " + std::to_string(size));
    if (size > config.memory_size)
      throw std::invalid_argument("size exceeds memory: " + std::to_string(size));

    switch (mode) {
      case SweepMode::kGlobal: {
        std::vector<int> all(config.sm_count);
        for (int sm = 0; sm < config.sm_count; ++sm) all[sm] = sm;
        plans[i] = shared_window_plan(all, {0, size});
        break;
      }
      case SweepMode::kNaiveHalf: {
        const std::uint64_t mid = page_floor(size / 2, config.page_size);
        if (mid == 0)
          throw std::invalid_argument("size too small to halve: " + std::to_string(size));
        const Window halves[2] = {{0, mid}, {mid, size - mid}};
        SplitMix64 rng(seed);
        for (int sm = 0; sm < config.sm_count; ++sm) {
          plans[i].windows[sm] = halves[rng.next() & 1];
          plans[i].active.insert(sm);
        }
        break;
      }
      case SweepMode::kGroupAligned: {
        const PlacementPlan placement = make_placement(
            config.groups(), size, config.tlb_reach, config.page_size);
        plans[i] = to_access_plan(placement, config);
        break;
      }
    }
  }

  parallel_for(sizes.size(), [&](std::size_t i) {
    curve.points[i] = {sizes[i], simulate_throughput(config, plans[i]).total};
  });
  return curve;
}

ProbeData probe_pairs(const MachineConfig& config) {
  const int n = config.sm_count;
  const Window window{0, probe_window_bytes(config)};

  ProbeData probe;
  probe.solo.resize(n);
  probe.pairs.resize(n, n);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const int sm = static_cast<int>(i);
    probe.solo[sm] = simulate_throughput(config, shared_window_plan({sm}, window)).total;
  });

  std::vector<std::pair<int, int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cells.emplace_back(i, j);

  std::vector<double> results(cells.size());
  parallel_for(cells.size(), [&](std::size_t c) {
    const auto [i, j] = cells[c];
    results[c] = simulate_throughput(config, shared_window_plan({i, j}, window)).total;
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto [i, j] = cells[c];
    probe.pairs(i, j) = results[c];
    probe.pairs(j, i) = results[c];
  }
  probe.pairs.diagonal() = probe.solo;
  return probe;
}

Eigen::VectorXd single_groups(const MachineConfig& config) {
  const Window window{0, probe_window_bytes(config)};
  const std::vector<std::vector<int>> members = config.groups();

  Eigen::VectorXd totals(members.size());
  parallel_for(members.size(), [&](std::size_t g) {
    totals[static_cast<Eigen::Index>(g)] =
        simulate_throughput(config, shared_window_plan(members[g], window)).total;
  });
  return totals;
}

Eigen::MatrixXd group_pairs(const MachineConfig& config) {
  const std::vector<std::vector<int>> members = config.groups();
  const int groups = static_cast<int>(members.size());

  // Two disjoint probe regions, both inside memory and under reach.
  const std::uint64_t len = std::min(
      probe_window_bytes(config), page_floor(config.memory_size / 2, config.page_size));
  if (len == 0) throw std::invalid_argument("config too small for paired probe windows");
  const Window first{0, len};
  const Window second{len, len};

  Eigen::MatrixXd totals(groups, groups);
  totals.diagonal() = single_groups(config);

  std::vector<std::pair<int, int>> cells;
  for (int a = 0; a < groups; ++a)
    for (int b = a + 1; b < groups; ++b) cells.emplace_back(a, b);

  std::vector<double> results(cells.size());
  parallel_for(cells.size(), [&](std::size_t c) {
    const auto [a, b] = cells[c];
    AccessPlan plan;
    for (int sm : members[a]) {
      plan.windows[sm] = first;
      plan.active.insert(sm);
    }
    for (int sm : members[b]) {
      plan.windows[sm] = second;
      plan.active.insert(sm);
    }
    results[c] = simulate_throughput(config, plan).total;
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto [a, b] = cells[c];
    totals(a, b) = results[c];
    totals(b, a) = results[c];
  }
  return totals;
}

}  // namespace tlbscope
