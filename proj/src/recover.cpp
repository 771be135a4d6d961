#include "tlbscope/recover.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tlbscope {

namespace {

void check_probe(const ProbeData& probe) {
  const Eigen::Index n = probe.solo.size();
  if (n < 2) throw std::invalid_argument("probe needs at least 2 SMs");
  if (probe.pairs.rows() != n || probe.pairs.cols() != n)
    throw std::invalid_argument("pair matrix does not match solo vector");
}

bool dips(const ProbeData& probe, int i, int j, double delta) {
  return probe.pairs(i, j) <= (1.0 - delta) * (probe.solo[i] + probe.solo[j]);
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

GroupRecovery recover_groups(const ProbeData& probe, double delta) {
  check_probe(probe);
  const int n = static_cast<int>(probe.solo.size());

  DisjointSet dsu(n);
  std::size_t edges = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dips(probe, i, j, delta)) {
        dsu.unite(i, j);
        ++edges;
      }
    }
  }
  if (edges == 0) throw analysis_error("no shared-resource signal");

  // Components keyed by smallest member, members ascending.
  std::vector<std::vector<int>> by_root(n);
  for (int sm = 0; sm < n; ++sm) by_root[dsu.find(sm)].push_back(sm);
  GroupRecovery result;
  for (int sm = 0; sm < n; ++sm)
    if (by_root[dsu.find(sm)].front() == sm) result.groups.push_back(by_root[dsu.find(sm)]);

  // Quality: intra-group pairs whose dip was below threshold anyway.
  std::size_t intra = 0;
  std::size_t missing = 0;
  for (const std::vector<int>& group : result.groups) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        ++intra;
        if (!dips(probe, group[a], group[b], delta)) ++missing;
      }
    }
  }
  result.clique_deficiency =
      intra == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(intra);
  return result;
}

std::vector<std::array<int, 2>> recover_tpcs(const ProbeData& probe,
                                             const std::vector<std::vector<int>>& groups) {
  check_probe(probe);
  const int n = static_cast<int>(probe.solo.size());

  std::vector<int> partner(n, -1);
  for (const std::vector<int>& group : groups) {
    if (group.size() < 2) {
      throw analysis_error("ambiguous TPC structure: sm " +
                           std::to_string(group.empty() ? -1 : group.front()) +
                           " has no group peer");
    }
    for (int i : group) {
      int best = -1;
      for (int j : group) {
        if (j == i) continue;
        if (best == -1 || probe.pairs(i, j) < probe.pairs(i, best)) best = j;
      }
      partner[i] = best;
    }
  }

  std::vector<std::array<int, 2>> tpcs;
  for (int i = 0; i < n; ++i) {
    if (partner[i] == -1) continue;  // SM not covered by the given groups
    const int p = partner[i];
    if (partner[p] != i)
      throw analysis_error("ambiguous TPC structure: sm " + std::to_string(i) +
                           " prefers sm " + std::to_string(p) + " but sm " +
                           std::to_string(p) + " prefers sm " + std::to_string(partner[p]));
    if (i < p) tpcs.push_back({i, p});
  }
  std::sort(tpcs.begin(), tpcs.end());
  return tpcs;
}

Topology make_topology(std::vector<std::vector<int>> groups,
                       std::vector<std::array<int, 2>> tpcs, int sm_count) {
  // Partition check.
  std::vector<int> group_of(sm_count, -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::sort(groups[g].begin(), groups[g].end());
    for (int sm : groups[g]) {
      if (sm < 0 || sm >= sm_count || group_of[sm] != -1)
        throw std::invalid_argument("groups do not partition the SM indices");
      group_of[sm] = static_cast<int>(g);
    }
  }
  for (int sm = 0; sm < sm_count; ++sm)
    if (group_of[sm] == -1) throw std::invalid_argument("groups do not partition the SM indices");

  // Matching check: every SM in exactly one TPC, partners share a group.
  std::vector<int> partner(sm_count, -1);
  for (auto& pair : tpcs) {
    if (pair[0] > pair[1]) std::swap(pair[0], pair[1]);
    for (int sm : pair)
      if (sm < 0 || sm >= sm_count || partner[sm] != -1)
        throw std::invalid_argument("tpcs are not a perfect matching");
    if (group_of[pair[0]] != group_of[pair[1]])
      throw std::invalid_argument("TPC pair straddles groups");
    partner[pair[0]] = pair[1];
    partner[pair[1]] = pair[0];
  }
  for (int sm = 0; sm < sm_count; ++sm)
    if (partner[sm] == -1) throw std::invalid_argument("tpcs are not a perfect matching");

  // Display order: groups by (size desc, smallest member asc); inside a
  // group, TPC pairs by smallest member, partners adjacent.
  std::sort(groups.begin(), groups.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.front() < b.front();
            });

  Topology topo;
  topo.permutation.assign(sm_count, -1);
  int position = 0;
  for (const std::vector<int>& group : groups) {
    for (int sm : group) {
      if (sm > partner[sm]) continue;  // emit each TPC once, from its lower SM
      topo.permutation[sm] = position++;
      topo.permutation[partner[sm]] = position++;
    }
  }

  std::sort(tpcs.begin(), tpcs.end());
  topo.groups = std::move(groups);
  topo.tpcs = std::move(tpcs);
  return topo;
}

Eigen::MatrixXd reorder(const Eigen::MatrixXd& matrix, const Topology& topology) {
  const Eigen::Index n = static_cast<Eigen::Index>(topology.permutation.size());
  if (matrix.rows() != n || matrix.cols() != n)
    throw std::invalid_argument("matrix dimension does not match topology");

  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  for (Eigen::Index i = 0; i < n; ++i) perm.indices()[i] = topology.permutation[i];
  return perm * matrix * perm.transpose();
}

std::string write_topology_json(const Topology& topology) {
  nlohmann::ordered_json j;
  j["groups"] = topology.groups;
  j["tpcs"] = topology.tpcs;
  j["permutation"] = topology.permutation;
  return j.dump(2) + "\n";
}

Topology parse_topology_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::vector<int>> groups = j.at("groups").get<std::vector<std::vector<int>>>();
  std::vector<std::array<int, 2>> tpcs = j.at("tpcs").get<std::vector<std::array<int, 2>>>();
  int sm_count = 0;
  for (const auto& g : groups) sm_count += static_cast<int>(g.size());
  return make_topology(std::move(groups), std::move(tpcs), sm_count);
}

}  // namespace tlbscope
