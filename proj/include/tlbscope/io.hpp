#pragma once

#include "tlbscope/experiments.hpp"

#include <Eigen/Core>

#include <string>

namespace tlbscope {

// CSV formats. All throughput values are written in GB/s with a fixed
// 6-decimal format so outputs diff cleanly; parsers return bytes/s.

// Square matrix with a header row and column of SM indices:
//   sm,0,1,...\n0,70.000000,80.000000,...\n...
std::string write_matrix_csv(const Eigen::MatrixXd& bytes_per_sec);
Eigen::MatrixXd parse_matrix_csv(const std::string& text);

// "sm,gbps" rows, one per SM.
std::string write_solo_csv(const Eigen::VectorXd& bytes_per_sec);
Eigen::VectorXd parse_solo_csv(const std::string& text);

// "size_bytes,total_gbps" rows in size order.
std::string write_sweep_csv(const SweepCurve& curve);

// "group,gbps" rows, used for placement weights.
Eigen::VectorXd parse_weights_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tlbscope
