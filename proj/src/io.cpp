#include "easvar/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "easvar/errors.hpp"

namespace easvar {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  if (!cell.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (cell.empty() || ec != std::errc() || ptr != e) {
    throw ParseError("line " + std::to_string(line) + ": non-numeric cell '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  CsvTable t;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (t.names.empty()) {
      t.names = cells;
      continue;
    }
    if (cells.size() != t.names.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(t.names.size()) + " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c, lineno));
    rows.push_back(std::move(row));
  }
  if (t.names.empty()) throw ParseError("empty CSV");
  if (rows.empty()) throw ParseError("CSV has a header but no data rows");
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      t.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

TimeSeriesData ingest_table(const CsvTable& table, bool difference) {
  Matrix obs = table.values.transpose();  // p x T
  if (difference) {
    if (obs.cols() < 2) throw ParseError("differencing needs at least two rows");
    obs = (obs.rightCols(obs.cols() - 1) - obs.leftCols(obs.cols() - 1)).eval();
  }
  if (obs.cols() < 2) throw ParseError("fewer than two usable time points");
  Matrix series(obs.rows(), obs.cols() + 1);
  series.col(0).setZero();
  series.rightCols(obs.cols()) = obs;
  if (!series.allFinite()) throw ParseError("non-finite values in CSV");
  return TimeSeriesData(std::move(series));
}

TimeSeriesData ingest_csv(const std::string& path, bool difference, std::vector<std::string>* names) {
  const CsvTable t = read_csv(path);
  if (names) *names = t.names;
  return ingest_table(t, difference);
}

std::string format_csv(const Matrix& series, const std::vector<std::string>& names) {
  if (names.size() != static_cast<std::size_t>(series.rows())) {
    throw std::invalid_argument("format_csv: one name per series required");
  }
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  out += "\n";
  char buf[64];
  for (Eigen::Index t = 0; t < series.cols(); ++t) {
    for (Eigen::Index j = 0; j < series.rows(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", series(j, t));
      if (j) out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void export_csv(const std::string& path, const Matrix& series, const std::vector<std::string>& names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << format_csv(series, names);
}

std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < p; ++j) out.push_back("x" + std::to_string(j + 1));
  return out;
}

}  // namespace easvar
