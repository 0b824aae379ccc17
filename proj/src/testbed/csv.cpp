#include "testbed/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace lesam::testbed {

using numcore::Batch;

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ' || cell.back() == '\t')) cell.pop_back();
    size_t start = cell.find_first_not_of(" \t");
    cells.push_back(start == std::string::npos ? "" : cell.substr(start));
  }
  return cells;
}

double parse_double(const std::string& s, int line_no, size_t col) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw Error(Errc::parse_error, "csv: line " + std::to_string(line_no) + " column " +
                                       std::to_string(col + 1) + ": not a number: '" + s + "'");
  }
  if (!std::isfinite(v)) {
    throw Error(Errc::parse_error, "csv: line " + std::to_string(line_no) + " column " +
                                       std::to_string(col + 1) + ": non-finite value");
  }
  return v;
}

int parse_label(const std::string& s, int line_no, size_t col) {
  const char* begin = s.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw Error(Errc::parse_error, "csv: line " + std::to_string(line_no) + " column " +
                                       std::to_string(col + 1) + ": not an integer label: '" + s + "'");
  }
  if (v < 0) {
    throw Error(Errc::validation_error, "csv: line " + std::to_string(line_no) + ": negative label");
  }
  return static_cast<int>(v);
}

}  // namespace

Batch load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, "csv: missing header row");
  size_t ncols = split_row(line).size();
  if (ncols < 2) throw Error(Errc::parse_error, "csv: need at least one feature column and a label");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_row(line);
    if (cells.size() != ncols) {
      throw Error(Errc::parse_error, "csv: line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(ncols) + " cells, got " +
                                         std::to_string(cells.size()));
    }
    std::vector<double> feats(ncols - 1);
    for (size_t c = 0; c + 1 < ncols; ++c) feats[c] = parse_double(cells[c], line_no, c);
    labels.push_back(parse_label(cells.back(), line_no, ncols - 1));
    rows.push_back(std::move(feats));
  }
  if (rows.empty()) throw Error(Errc::validation_error, "csv: no data rows");

  Batch b;
  b.inputs.resize(static_cast<int>(rows.size()), static_cast<int>(ncols - 1));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c + 1 < ncols; ++c) b.inputs(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  }
  b.targets = std::move(labels);
  return b;
}

}  // namespace lesam::testbed
