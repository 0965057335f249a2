#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dagopt/datagen.hpp"

namespace dagopt {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix parse_csv_matrix(std::istream& in, bool has_header, std::vector<std::string>* names,
                        const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    for (auto& c : cells) c = trim(c);
    if (has_header && header.empty()) {
      header = std::move(cells);
      width = header.size();
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw std::runtime_error(source + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                               " columns, expected " + std::to_string(width));
    }
    std::vector<double> values(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (!parse_double(cells[c], values[c])) {
        throw std::runtime_error(source + ": row " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                 ": non-numeric value '" + cells[c] + "'");
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error(source + ": no data rows");
  Matrix x(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) x(i, j) = rows[i][j];
  }
  if (names) *names = std::move(header);
  return x;
}

Dataset parse_csv(std::istream& in, bool has_header, const std::string& source) {
  std::vector<std::string> names;
  Matrix raw = parse_csv_matrix(in, has_header, &names, source);
  if (raw.rows() < 2 || raw.cols() < 2) throw DimensionError(source + ": need at least 2 rows and 2 columns");
  return standardize(raw, std::move(names));
}

Dataset load_csv(const std::string& path, bool has_header) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return parse_csv(f, has_header, path);
}

void write_csv(const Matrix& values, const std::vector<std::string>& names, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < names.size(); ++j) f << (j ? "," : "") << names[j];
  if (!names.empty()) f << "\n";
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t j = 0; j < values.cols(); ++j) f << (j ? "," : "") << format_double(values(i, j));
    f << "\n";
  }
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::vector<Edge> edges_of(const CoefficientMatrix& y, const std::vector<std::string>& names, double tol) {
  std::vector<Edge> out;
  for (std::size_t k = 0; k < y.cols(); ++k) {
    for (std::size_t j = 0; j < y.rows(); ++j) {
      if (j != k && std::fabs(y(j, k)) > tol) out.push_back({names.at(j), names.at(k), y(j, k)});
    }
  }
  return out;
}

void write_edges(const std::vector<Edge>& edges, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "from,to,coef\n";
  for (const auto& e : edges) f << e.from << "," << e.to << "," << format_double(e.coef) << "\n";
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::vector<Edge> read_edges(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<Edge> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    for (auto& c : cells) c = trim(c);
    if (line_no == 1 && cells.size() >= 2 && cells[0] == "from" && cells[1] == "to") continue;
    if (cells.size() < 2 || cells.size() > 3) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) + ": expected from,to[,coef]");
    }
    Edge e{cells[0], cells[1], 1.0};
    if (cells.size() == 3 && !parse_double(cells[2], e.coef)) {
      throw std::runtime_error(path + ": row " + std::to_string(line_no) + ", column 3: non-numeric coef");
    }
    out.push_back(std::move(e));
  }
  return out;
}

BinaryAdjacency adjacency_from_edges(const std::vector<Edge>& edges, const std::vector<std::string>& names) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  BinaryAdjacency z(names.size());
  for (const auto& e : edges) {
    auto a = index.find(e.from);
    auto b = index.find(e.to);
    if (a == index.end() || b == index.end()) throw std::invalid_argument("edge " + e.from + "->" + e.to + " uses an unknown node");
    z.set(a->second, b->second);
  }
  return z;
}

}  // namespace dagopt
