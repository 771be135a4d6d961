#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlbscope/experiments.hpp"
#include "tlbscope/rng.hpp"
#include "tlbscope/simulate.hpp"
#include "tlbscope/units.hpp"
#include "test_support.hpp"

#include <vector>

using namespace tlbscope;

namespace {

// Pinned by search: with this seed every group's naive-half union at
// 80 GiB covers both halves, the worst (and typical) case for the naive
// split. The first test below re-checks that premise.
constexpr std::uint64_t kNaiveHalfSeed = 0;

AccessPlan naive_half_plan(const MachineConfig& c, std::uint64_t size, std::uint64_t seed) {
  const std::uint64_t mid = size / 2 / c.page_size * c.page_size;
  const Window halves[2] = {{0, mid}, {mid, size - mid}};
  SplitMix64 rng(seed);
  AccessPlan plan;
  for (int sm = 0; sm < c.sm_count; ++sm) {
    plan.windows[sm] = halves[rng.next() & 1];
    plan.active.insert(sm);
  }
  return plan;
}

}  // namespace

TEST_CASE("pinned naive-half seed mixes every group") {
  const MachineConfig c = default_a100();
  const AccessPlan plan = naive_half_plan(c, 80 * kGiB, kNaiveHalfSeed);
  for (int g = 0; g < c.group_count(); ++g)
    CHECK(union_pages(plan, g, c) == 80 * kGiB / c.page_size);
}

TEST_CASE("global sweep: plateau and cliff") {
  const MachineConfig c = default_a100();

  const SweepCurve plateau = sweep(c, {40 * kGiB}, SweepMode::kGlobal, 0);
  CHECK(plateau.points[0].second == 1620e9);  // 12 * 120 + 2 * 90

  const SweepCurve cliff = sweep(c, {80 * kGiB}, SweepMode::kGlobal, 0);
  CHECK(cliff.points[0].second < 0.5 * 1620e9);
  // All caps are slack at 80 GiB: total is 108 demands at h = 0.8.
  const double expected = 108 * c.sm_rate * slowdown(hit_rate(80 * kGiB, c.tlb_reach), 50.0);
  CHECK(cliff.points[0].second == doctest::Approx(expected).epsilon(1e-12));
  CHECK(cliff.points[0].second == doctest::Approx(700e9).epsilon(1e-9));

  // Constant up to reach, never increasing past it.
  const std::vector<std::uint64_t> grid = default_sweep_sizes(c);
  const SweepCurve curve = sweep(c, grid, SweepMode::kGlobal, 0);
  double previous = kUnbounded;
  for (const auto& [size, total] : curve.points) {
    if (size <= c.tlb_reach) CHECK(total == 1620e9);
    CHECK(total <= previous);
    previous = total;
  }
}

TEST_CASE("naive-half sweep matches global at 80 GiB") {
  const MachineConfig c = default_a100();
  const double global80 = sweep(c, {80 * kGiB}, SweepMode::kGlobal, 0).points[0].second;
  const double naive80 =
      sweep(c, {80 * kGiB}, SweepMode::kNaiveHalf, kNaiveHalfSeed).points[0].second;
  CHECK(std::abs(naive80 - global80) <= 0.05 * global80);
  // With every group mixed the two plans have identical unions.
  CHECK(naive80 == global80);
}

TEST_CASE("group-aligned sweep is flat at the plateau") {
  const MachineConfig c = default_a100();
  const SweepCurve curve = sweep(c, default_sweep_sizes(c), SweepMode::kGroupAligned, 123);
  for (const auto& [size, total] : curve.points) CHECK(total == 1620e9);
}

TEST_CASE("sweep rejects bad sizes") {
  const MachineConfig c = default_a100();
  CHECK_THROWS_AS(sweep(c, {40 * kGiB + 5}, SweepMode::kGlobal, 0), std::invalid_argument);
  CHECK_THROWS_AS(sweep(c, {96 * kGiB}, SweepMode::kGlobal, 0), std::invalid_argument);
}

TEST_CASE("probe_pairs separates the three sharing levels") {
  const MachineConfig c = default_a100();
  const ProbeData probe = probe_pairs(c);

  REQUIRE(probe.solo.size() == 108);
  REQUIRE(probe.pairs.rows() == 108);
  for (int sm = 0; sm < 108; ++sm) CHECK(probe.solo[sm] == 70e9);

  CHECK(probe.pairs(0, 1) == 80e9);    // same TPC
  CHECK(probe.pairs(0, 2) == 120e9);   // same size-8 group, different TPC
  CHECK(probe.pairs(96, 98) == 90e9);  // same size-6 group, different TPC
  CHECK(probe.pairs(0, 8) == 140e9);   // different groups

  CHECK(probe.pairs == probe.pairs.transpose().eval());
  CHECK((probe.pairs.diagonal() - probe.solo).cwiseAbs().maxCoeff() == 0.0);

  // Separability: a pair dips below its solo sum exactly when it shares
  // a group. This is what recovery relies on.
  for (int i = 0; i < 108; ++i) {
    for (int j = i + 1; j < 108; ++j) {
      const double solo_sum = probe.solo[i] + probe.solo[j];
      if (c.group_of[i] == c.group_of[j])
        CHECK(probe.pairs(i, j) < solo_sum);
      else
        CHECK(probe.pairs(i, j) == solo_sum);
    }
  }
}

TEST_CASE("single_groups reproduces the 120/90 split") {
  const MachineConfig c = default_a100();
  const Eigen::VectorXd totals = single_groups(c);
  REQUIRE(totals.size() == 14);
  for (int g = 0; g < 12; ++g) CHECK(totals[g] == 120e9);
  CHECK(totals[12] == 90e9);
  CHECK(totals[13] == 90e9);
  CHECK(totals[0] / totals[12] == 8.0 / 6.0);
}

TEST_CASE("group_pairs shows full independence") {
  const MachineConfig c = default_a100();
  const Eigen::MatrixXd pairs = group_pairs(c);
  const Eigen::VectorXd singles = single_groups(c);

  CHECK(pairs(0, 1) == 240e9);           // two size-8 groups
  CHECK(pairs(0, 12) == 210e9);          // size-8 with size-6
  CHECK(pairs(12, 12) == 90e9);          // diagonal = single group
  CHECK(pairs == pairs.transpose().eval());

  for (int a = 0; a < 14; ++a)
    for (int b = 0; b < 14; ++b)
      if (a != b) CHECK(pairs(a, b) == singles[a] + singles[b]);
}
