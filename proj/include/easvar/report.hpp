#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "easvar/conditions.hpp"
#include "easvar/gimh.hpp"
#include "easvar/metrics.hpp"
#include "easvar/run_config.hpp"

namespace easvar {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kDefaultDotThreshold = 0.05;

/// Directed graph with an edge k -> j whenever inclusion(j, k) >= threshold,
/// labeled with the probability to two decimals; pen width is proportional
/// to the probability.
std::string inclusion_dot(const Matrix& inclusion, const std::vector<std::string>& names,
                          double threshold = kDefaultDotThreshold);
std::string export_inclusion_dot(const ChainResult& result, const std::vector<std::string>& names,
                                 double threshold = kDefaultDotThreshold);

nlohmann::json to_json(const MetricRecord& m);
nlohmann::json to_json(const ConditionReport& c);
nlohmann::json matrix_json(const Matrix& m);
nlohmann::json chain_json(const ChainResult& r);

/// metrics.csv: one header row and one value row; absent metrics are empty.
std::string metrics_csv(const MetricRecord& m);

struct ReportContext {
  const RunConfig* config = nullptr;
  std::vector<std::string> names;
  std::size_t n = 0;
  std::optional<double> d;
  std::string timestamp;  // empty: current UTC time
};

nlohmann::json report_json(const ChainResult& result, const std::optional<MetricRecord>& metrics,
                           const std::optional<ConditionReport>& conditions,
                           const ReportContext& ctx);

/// Writes report.json, metrics.csv and inclusion.dot into output_dir
/// (created if missing). Throws std::runtime_error for an unwritable
/// directory.
void emit_report(const ChainResult& result, const std::optional<MetricRecord>& metrics,
                 const std::optional<ConditionReport>& conditions, const std::string& output_dir,
                 const ReportContext& ctx);

std::string utc_timestamp();

void write_text(const std::string& path, const std::string& text);

}  // namespace easvar
