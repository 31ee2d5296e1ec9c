#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "easvar/admissibility.hpp"
#include "easvar/baselines.hpp"
#include "easvar/experiment.hpp"
#include "easvar/gimh.hpp"
#include "easvar/simulate.hpp"

namespace easvar {

enum class Command { Simulate, Select, Check, Bench, Ingest };

std::string to_string(Command command);
Command parse_command(const std::string& name);

/// Everything a run depends on. Serialized as flat "key = value" lines with
/// dotted section prefixes (eas., chain., enet., sim., bench.).
struct RunConfig {
  Command command = Command::Select;
  std::optional<std::string> input_path;
  std::optional<std::string> truth_path;  // CSV of A0 for check, rows = equations
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  bool difference = false;
  double dot_threshold = 0.05;
  double cond1_threshold = 8.0;
  bool auto_d = true;  // calibrate d from the elastic-net graph

  EasParams eas;
  ChainConfig chain;
  std::vector<std::size_t> init_graph_indices;  // 1-based vec indices
  EnetConfig enet;

  // simulate
  PatternKind pattern = PatternKind::Random;
  std::size_t p = 4;
  std::size_t n = 120;

  // bench
  std::string design = "table1";
  std::optional<std::size_t> seeds;
  std::size_t threads = 0;
  std::vector<Method> methods = all_methods();

  /// Canonical key -> value text for every field, in key order.
  std::map<std::string, std::string> to_map() const;
  std::string serialize() const;
  void set(const std::string& key, const std::string& value);
  void validate() const;

  // chain with the explicit start graph resolved for dimension p.
  ChainConfig chain_for(std::size_t p) const;
};

/// Known keys, in serialization order.
const std::vector<std::string>& config_keys();

/// '#' starts a comment; blank lines are ignored. Throws ConfigError for
/// unknown keys, malformed lines or bad values.
RunConfig parse_run_config(const std::string& text, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

}  // namespace easvar
