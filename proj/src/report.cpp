#include "easvar/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace easvar {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string inclusion_dot(const Matrix& inclusion, const std::vector<std::string>& names,
                          double threshold) {
  const auto p = inclusion.rows();
  if (static_cast<std::size_t>(p) != names.size() || inclusion.cols() != p) {
    throw std::invalid_argument("inclusion_dot: one name per series required");
  }
  std::string out = "digraph inclusion {\n";
  for (const auto& n : names) out += "  " + quoted(n) + ";\n";
  char buf[96];
  for (Eigen::Index k = 0; k < p; ++k) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double v = inclusion(j, k);
      // Compare on the printed scale so 0.05 stays in at threshold .05.
      if (!(v >= threshold - 1e-12)) continue;
      std::snprintf(buf, sizeof buf, " [label=\"%.2f\", penwidth=%.3f];\n", v, 5.0 * v);
      out += "  " + quoted(names[static_cast<std::size_t>(k)]) + " -> " +
             quoted(names[static_cast<std::size_t>(j)]) + buf;
    }
  }
  return out + "}\n";
}

std::string export_inclusion_dot(const ChainResult& result, const std::vector<std::string>& names,
                                 double threshold) {
  return inclusion_dot(result.inclusion, names, threshold);
}

nlohmann::json matrix_json(const Matrix& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

nlohmann::json to_json(const MetricRecord& m) {
  nlohmann::json j;
  j["l2_err"] = m.l2_err;
  j["lf_err"] = m.lf_err;
  j["g_map_size"] = m.g_map_size;
  if (m.est_err) j["est_err"] = *m.est_err;
  if (m.fpr) j["fpr"] = *m.fpr;
  if (m.fnr) j["fnr"] = *m.fnr;
  if (m.r_hat_go) j["r_hat_go"] = *m.r_hat_go;
  if (m.map_equals_oracle) j["map_equals_oracle"] = *m.map_equals_oracle;
  return j;
}

nlohmann::json to_json(const ConditionReport& c) {
  nlohmann::json j;
  j["cond1_value"] = c.cond1_value;
  j["cond1_threshold"] = c.cond1_threshold;
  j["cond1_pass"] = c.cond1_pass;
  if (c.cond2_pass) j["cond2_pass"] = *c.cond2_pass;
  if (c.cond2_lhs) j["cond2_lhs"] = *c.cond2_lhs;
  if (c.cond2_rhs) j["cond2_rhs"] = *c.cond2_rhs;
  if (c.cond3_pass) {
    j["cond3_pass"] = *c.cond3_pass;
    j["cond3_checked"] = c.cond3_checked;
    j["cond3_failed"] = c.cond3_failed;
  }
  j["notes"] = c.notes;
  return j;
}

nlohmann::json chain_json(const ChainResult& r) {
  std::vector<std::pair<Graph, std::size_t>> visits(r.visits.begin(), r.visits.end());
  std::stable_sort(visits.begin(), visits.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  auto table = nlohmann::json::array();
  for (const auto& [g, count] : visits) {
    table.push_back({{"edges", g.vec_indices()},
                     {"count", count},
                     {"frequency", static_cast<double>(count) / static_cast<double>(r.kept)}});
  }
  nlohmann::json j;
  j["map_graph"] = r.map_graph.vec_indices();
  j["start_graph"] = r.start_graph.vec_indices();
  j["kept_steps"] = r.kept;
  j["acceptance_rate"] = r.acceptance_rate;
  j["visits"] = table;
  j["inclusion"] = matrix_json(r.inclusion);
  j["a_bma"] = matrix_json(r.a_bma);
  return j;
}

std::string metrics_csv(const MetricRecord& m) {
  auto num = [](std::optional<double> v) {
    if (!v) return std::string();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return std::string(buf);
  };
  std::string out = "l2_err,lf_err,est_err,g_map_size,fpr,fnr,r_hat_go,map_equals_oracle\n";
  out += num(m.l2_err) + "," + num(m.lf_err) + "," + num(m.est_err) + "," +
         std::to_string(m.g_map_size) + "," + num(m.fpr) + "," + num(m.fnr) + "," +
         num(m.r_hat_go) + "," +
         (m.map_equals_oracle ? (*m.map_equals_oracle ? "true" : "false") : "") + "\n";
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json report_json(const ChainResult& result, const std::optional<MetricRecord>& metrics,
                           const std::optional<ConditionReport>& conditions,
                           const ReportContext& ctx) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["generated_at"] = ctx.timestamp.empty() ? utc_timestamp() : ctx.timestamp;
  if (ctx.config) {
    j["seed"] = ctx.config->seed;
    nlohmann::json echo = nlohmann::json::object();
    for (const auto& [k, v] : ctx.config->to_map()) echo[k] = v;
    j["config"] = echo;
  }
  j["p"] = ctx.names.size();
  j["n"] = ctx.n;
  j["names"] = ctx.names;
  if (ctx.d) j["d"] = *ctx.d;
  j["chain"] = chain_json(result);
  j["metrics"] = metrics ? to_json(*metrics) : nlohmann::json(nullptr);
  j["conditions"] = conditions ? to_json(*conditions) : nlohmann::json(nullptr);
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_report(const ChainResult& result, const std::optional<MetricRecord>& metrics,
                 const std::optional<ConditionReport>& conditions, const std::string& output_dir,
                 const ReportContext& ctx) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + output_dir + "': " + ec.message());
  const fs::path dir(output_dir);
  write_text((dir / "report.json").string(), report_json(result, metrics, conditions, ctx).dump(2) + "\n");
  std::string csv = metrics_csv(MetricRecord{});
  if (metrics) {
    csv = metrics_csv(*metrics);
  } else {
    csv.erase(csv.find('\n') + 1);
  }
  write_text((dir / "metrics.csv").string(), csv);
  const double threshold = ctx.config ? ctx.config->dot_threshold : kDefaultDotThreshold;
  write_text((dir / "inclusion.dot").string(), export_inclusion_dot(result, ctx.names, threshold));
}

}  // namespace easvar
