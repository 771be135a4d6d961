#include "tlbscope/experiments.hpp"
#include "tlbscope/io.hpp"
#include "tlbscope/model.hpp"
#include "tlbscope/placement.hpp"
#include "tlbscope/recover.hpp"
#include "tlbscope/svg.hpp"
#include "tlbscope/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitUsage = 2;     // bad flags, unreadable or invalid inputs
constexpr int kExitAnalysis = 3;  // measurements carry no usable structure

tlbscope::MachineConfig load_config(const std::string& path) {
  if (path.empty()) return tlbscope::default_a100();
  const tlbscope::MachineConfig config =
      tlbscope::parse_config_json(tlbscope::read_file(path));
  const std::vector<std::string> violations = tlbscope::validate(config);
  if (!violations.empty()) {
    std::string msg = "invalid config " + path + ":";
    for (const std::string& v : violations) msg += "\n  " + v;
    throw std::runtime_error(msg);
  }
  return config;
}

// One manifest next to each command's primary output; rerunning the
// recorded command reproduces every listed output byte for byte.
void write_manifest(const std::string& primary_output, const std::string& command_line,
                    const std::string& config_path, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  nlohmann::ordered_json j;
  j["tool_version"] = kVersion;
  j["command"] = command_line;
  j["config"] = config_path.empty() ? "builtin:a100" : config_path;
  j["seed"] = seed;
  j["outputs"] = outputs;
  tlbscope::write_file(primary_output + ".manifest.json", j.dump(2) + "\n");
}

std::string join_args(int argc, char** argv) {
  std::string line;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) line += ' ';
    line += argv[i];
  }
  return line;
}

std::string size_multiset(const std::vector<std::vector<int>>& groups) {
  std::map<std::size_t, int, std::greater<>> counts;
  for (const auto& g : groups) ++counts[g.size()];
  std::string out;
  for (const auto& [size, count] : counts) {
    if (!out.empty()) out += ", ";
    out += std::to_string(size) + "x" + std::to_string(count);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytic simulator and probing toolkit for group-partitioned GPU memory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  const std::string command_line = join_args(argc, argv);

  std::string config_path;
  std::uint64_t seed = 0;

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "throughput vs accessed-region size");
  std::string sweep_mode = "global";
  std::string sweep_sizes;
  std::string sweep_out = "sweep.csv";
  sweep_cmd->add_option("--config", config_path, "machine config JSON (default: built-in A100)");
  sweep_cmd->add_option("--mode", sweep_mode, "global|naive-half|group-aligned")
      ->check(CLI::IsMember({"global", "naive-half", "group-aligned"}));
  sweep_cmd->add_option("--sizes", sweep_sizes, "comma list, e.g. 40GiB,80GiB (default grid)");
  sweep_cmd->add_option("--seed", seed, "seed for naive-half assignment");
  sweep_cmd->add_option("--out", sweep_out, "output CSV path");

  // probe
  auto* probe_cmd = app.add_subcommand("probe", "solo and pairwise SM throughput");
  std::string probe_out = "matrix.csv";
  std::string probe_solo = "solo.csv";
  probe_cmd->add_option("--config", config_path, "machine config JSON");
  probe_cmd->add_option("--out", probe_out, "pair matrix CSV path");
  probe_cmd->add_option("--solo", probe_solo, "solo vector CSV path");

  // recover
  auto* recover_cmd = app.add_subcommand("recover", "reconstruct groups and TPC pairs");
  std::string rec_matrix, rec_solo, rec_report;
  std::string rec_out = "topology.json";
  double rec_delta = 0.05;
  recover_cmd->add_option("--matrix", rec_matrix, "pair matrix CSV")->required();
  recover_cmd->add_option("--solo", rec_solo, "solo vector CSV")->required();
  recover_cmd->add_option("--delta", rec_delta, "relative dip threshold (default 0.05)");
  recover_cmd->add_option("--out", rec_out, "topology JSON path");
  recover_cmd->add_option("--report", rec_report, "text report path (default: stdout)");

  // reorder
  auto* reorder_cmd = app.add_subcommand("reorder", "permute a matrix into topology order");
  std::string ro_matrix, ro_topology;
  std::string ro_out = "reordered.csv";
  reorder_cmd->add_option("--matrix", ro_matrix, "matrix CSV")->required();
  reorder_cmd->add_option("--topology", ro_topology, "topology JSON")->required();
  reorder_cmd->add_option("--out", ro_out, "output CSV path");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "assign groups to reach-sized memory chunks");
  std::string pl_topology, pl_memory, pl_reach, pl_weights;
  std::string pl_page = "2MiB";
  std::string pl_out = "plan.json";
  plan_cmd->add_option("--topology", pl_topology, "topology JSON")->required();
  plan_cmd->add_option("--memory", pl_memory, "total memory, e.g. 80GiB")->required();
  plan_cmd->add_option("--reach", pl_reach, "TLB reach, e.g. 64GiB")->required();
  plan_cmd->add_option("--page", pl_page, "page size (default 2MiB)");
  plan_cmd->add_option("--weights", pl_weights, "group,gbps CSV (default: SM counts)");
  plan_cmd->add_option("--out", pl_out, "placement JSON path");

  // render heatmap
  auto* render_cmd = app.add_subcommand("render", "render data files");
  render_cmd->require_subcommand(1);
  auto* heatmap_cmd = render_cmd->add_subcommand("heatmap", "grayscale SVG of a matrix CSV");
  std::string hm_matrix;
  std::string hm_out = "heatmap.svg";
  heatmap_cmd->add_option("--matrix", hm_matrix, "matrix CSV")->required();
  heatmap_cmd->add_option("--out", hm_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sweep_cmd) {
      const tlbscope::MachineConfig config = load_config(config_path);
      tlbscope::SweepMode mode = tlbscope::SweepMode::kGlobal;
      if (sweep_mode == "naive-half") mode = tlbscope::SweepMode::kNaiveHalf;
      if (sweep_mode == "group-aligned") mode = tlbscope::SweepMode::kGroupAligned;
      const std::vector<std::uint64_t> sizes = sweep_sizes.empty()
                                                   ? tlbscope::default_sweep_sizes(config)
                                                   : tlbscope::parse_size_list(sweep_sizes);
      const tlbscope::SweepCurve curve = tlbscope::sweep(config, sizes, mode, seed);
      tlbscope::write_file(sweep_out, tlbscope::write_sweep_csv(curve));
      write_manifest(sweep_out, command_line, config_path, seed, {sweep_out});
    } else if (*probe_cmd) {
      const tlbscope::MachineConfig config = load_config(config_path);
      const tlbscope::ProbeData probe = tlbscope::probe_pairs(config);
      tlbscope::write_file(probe_out, tlbscope::write_matrix_csv(probe.pairs));
      tlbscope::write_file(probe_solo, tlbscope::write_solo_csv(probe.solo));
      write_manifest(probe_out, command_line, config_path, seed, {probe_out, probe_solo});
    } else if (*recover_cmd) {
      tlbscope::ProbeData probe;
      probe.pairs = tlbscope::parse_matrix_csv(tlbscope::read_file(rec_matrix));
      probe.solo = tlbscope::parse_solo_csv(tlbscope::read_file(rec_solo));
      if (probe.solo.size() != probe.pairs.rows())
        throw std::runtime_error("solo vector and pair matrix disagree on SM count");

      const tlbscope::GroupRecovery recovery = tlbscope::recover_groups(probe, rec_delta);
      const auto tpcs = tlbscope::recover_tpcs(probe, recovery.groups);
      const tlbscope::Topology topology = tlbscope::make_topology(
          recovery.groups, tpcs, static_cast<int>(probe.solo.size()));

      tlbscope::write_file(rec_out, tlbscope::write_topology_json(topology));
      std::string report = std::to_string(topology.groups.size()) + " groups; sizes " +
                           size_multiset(topology.groups) + "\n" + "clique deficiency: ";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", recovery.clique_deficiency);
      report += std::string(buf) + "\n";
      std::vector<std::string> outputs = {rec_out};
      if (rec_report.empty()) {
        std::cout << report;
      } else {
        tlbscope::write_file(rec_report, report);
        outputs.push_back(rec_report);
      }
      write_manifest(rec_out, command_line, config_path, seed, outputs);
    } else if (*reorder_cmd) {
      const Eigen::MatrixXd matrix = tlbscope::parse_matrix_csv(tlbscope::read_file(ro_matrix));
      const tlbscope::Topology topology =
          tlbscope::parse_topology_json(tlbscope::read_file(ro_topology));
      tlbscope::write_file(ro_out, tlbscope::write_matrix_csv(tlbscope::reorder(matrix, topology)));
      write_manifest(ro_out, command_line, config_path, seed, {ro_out});
    } else if (*plan_cmd) {
      const tlbscope::Topology topology =
          tlbscope::parse_topology_json(tlbscope::read_file(pl_topology));
      std::vector<double> weights;
      if (!pl_weights.empty()) {
        const Eigen::VectorXd w = tlbscope::parse_weights_csv(tlbscope::read_file(pl_weights));
        weights.assign(w.begin(), w.end());
      }
      const tlbscope::PlacementPlan placement = tlbscope::make_placement(
          topology.groups, tlbscope::parse_size(pl_memory), tlbscope::parse_size(pl_reach),
          tlbscope::parse_size(pl_page), weights);
      tlbscope::write_file(pl_out, tlbscope::write_placement_json(placement));
      write_manifest(pl_out, command_line, config_path, seed, {pl_out});
    } else if (*heatmap_cmd) {
      const Eigen::MatrixXd matrix = tlbscope::parse_matrix_csv(tlbscope::read_file(hm_matrix));
      tlbscope::write_file(hm_out, tlbscope::render_heatmap_svg(matrix / tlbscope::kGBps));
      write_manifest(hm_out, command_line, config_path, seed, {hm_out});
    }
  } catch (const tlbscope::analysis_error& e) {
    std::cerr << "tlbscope: " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "tlbscope: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
