#pragma once

#include <string>
#include <vector>

#include "easvar/time_series.hpp"

namespace easvar {

struct CsvTable {
  std::vector<std::string> names;
  Matrix values;  // rows = time, columns = series
};

/// Header row of series names, then one numeric row per time instant.
/// Throws ParseError for ragged rows, non-numeric cells, or an empty body.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

/// Reads the CSV, transposes to p x T, optionally first-differences, then
/// prepends a zero column as X^(0). Throws ParseError when fewer than two
/// usable time points remain.
TimeSeriesData ingest_csv(const std::string& path, bool difference, std::vector<std::string>* names = nullptr);
TimeSeriesData ingest_table(const CsvTable& table, bool difference);

/// Writes a p x T matrix as rows = time with %.17g cells.
std::string format_csv(const Matrix& series, const std::vector<std::string>& names);
void export_csv(const std::string& path, const Matrix& series, const std::vector<std::string>& names);

/// Default names x1..xp.
std::vector<std::string> default_names(std::size_t p);

}  // namespace easvar
