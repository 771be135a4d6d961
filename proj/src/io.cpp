#include "tlbscope/io.hpp"

#include "tlbscope/units.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlbscope {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

double parse_value(const std::string& cell, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": bad value '" + cell + "'");
  }
}

int parse_index(const std::string& cell, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || v < 0)
    throw std::invalid_argument(std::string(what) + ": bad index '" + cell + "'");
  return v;
}

}  // namespace

std::string write_matrix_csv(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix csv: matrix must be square");
  std::string out = "sm";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + std::to_string(j);
  out += "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += std::to_string(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + format_gbps(m(i, j));
    out += "\n";
  }
  return out;
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text) {
  const std::vector<std::string> lines = csv_lines(text);
  if (lines.empty()) throw std::invalid_argument("matrix csv: empty file");

  const std::vector<std::string> header = split(lines[0], ',');
  if (header.empty() || header[0] != "sm")
    throw std::invalid_argument("matrix csv: header must start with 'sm'");
  const int n = static_cast<int>(header.size()) - 1;
  if (n <= 0 || static_cast<int>(lines.size()) != n + 1)
    throw std::invalid_argument("matrix csv: need one row per header column");
  for (int j = 0; j < n; ++j)
    if (parse_index(header[j + 1], "matrix csv header") != j)
      throw std::invalid_argument("matrix csv: header indices must be 0..n-1");

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const std::vector<std::string> cells = split(lines[i + 1], ',');
    if (static_cast<int>(cells.size()) != n + 1)
      throw std::invalid_argument("matrix csv: row " + std::to_string(i) + " has wrong arity");
    if (parse_index(cells[0], "matrix csv row") != i)
      throw std::invalid_argument("matrix csv: row indices must be 0..n-1 in order");
    for (int j = 0; j < n; ++j) m(i, j) = parse_value(cells[j + 1], "matrix csv") * kGBps;
  }
  return m;
}

std::string write_solo_csv(const Eigen::VectorXd& v) {
  std::string out = "sm,gbps\n";
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out += std::to_string(i) + "," + format_gbps(v[i]) + "\n";
  return out;
}

Eigen::VectorXd parse_solo_csv(const std::string& text) {
  const std::vector<std::string> lines = csv_lines(text);
  if (lines.empty() || lines[0] != "sm,gbps")
    throw std::invalid_argument("solo csv: expected 'sm,gbps' header");
  Eigen::VectorXd v(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> cells = split(lines[i], ',');
    if (cells.size() != 2 || parse_index(cells[0], "solo csv") != static_cast<int>(i) - 1)
      throw std::invalid_argument("solo csv: bad row '" + lines[i] + "'");
    v[static_cast<Eigen::Index>(i) - 1] = parse_value(cells[1], "solo csv") * kGBps;
  }
  return v;
}

std::string write_sweep_csv(const SweepCurve& curve) {
  std::string out = "size_bytes,total_gbps\n";
  for (const auto& [size, total] : curve.points)
    out += std::to_string(size) + "," + format_gbps(total) + "\n";
  return out;
}

Eigen::VectorXd parse_weights_csv(const std::string& text) {
  const std::vector<std::string> lines = csv_lines(text);
  if (lines.empty() || lines[0] != "group,gbps")
    throw std::invalid_argument("weights csv: expected 'group,gbps' header");
  Eigen::VectorXd v(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> cells = split(lines[i], ',');
    if (cells.size() != 2 || parse_index(cells[0], "weights csv") != static_cast<int>(i) - 1)
      throw std::invalid_argument("weights csv: bad row '" + lines[i] + "'");
    v[static_cast<Eigen::Index>(i) - 1] = parse_value(cells[1], "weights csv") * kGBps;
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::runtime_error("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out.good()) throw std::runtime_error("cannot write " + path);
}

}  // namespace tlbscope
