#include "easvar/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "easvar/errors.hpp"

namespace easvar {

std::string to_string(Command command) {
  switch (command) {
    case Command::Simulate: return "simulate";
    case Command::Select: return "select";
    case Command::Check: return "check";
    case Command::Bench: return "bench";
    case Command::Ingest: return "ingest";
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Simulate, Command::Select, Command::Check, Command::Bench, Command::Ingest}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + f(xs[i]);
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command", "input", "truth", "output_dir", "seed", "difference", "dot_threshold",
      "cond1_threshold",
      "eas.epsilon_mode", "eas.rho", "eas.d", "eas.c_bound", "eas.g_o_size_hint",
      "eas.epsilon_value",
      "chain.steps", "chain.burn_in", "chain.draws", "chain.init", "chain.init_graph",
      "chain.max_size", "chain.move_add", "chain.move_remove", "chain.move_swap", "chain.jacobian",
      "enet.l1_ratio", "enet.cv_folds", "enet.tol", "enet.max_iter", "enet.grid_size",
      "enet.grid_ratio", "enet.lambda_grid",
      "sim.pattern", "sim.p", "sim.n",
      "bench.design", "bench.seeds", "bench.threads", "bench.methods",
  };
  return keys;
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["command"] = to_string(command);
  m["input"] = input_path.value_or("");
  m["truth"] = truth_path.value_or("");
  m["output_dir"] = output_dir;
  m["seed"] = std::to_string(seed);
  m["difference"] = difference ? "true" : "false";
  m["dot_threshold"] = format_double(dot_threshold);
  m["cond1_threshold"] = format_double(cond1_threshold);
  m["eas.epsilon_mode"] = to_string(eas.epsilon_mode);
  m["eas.rho"] = format_double(eas.rho);
  m["eas.d"] = auto_d ? "auto" : format_double(eas.d);
  m["eas.c_bound"] = format_double(eas.c_bound);
  m["eas.g_o_size_hint"] = eas.g_o_size_hint ? std::to_string(*eas.g_o_size_hint) : "";
  m["eas.epsilon_value"] = format_double(eas.epsilon_value);
  m["chain.steps"] = std::to_string(chain.steps);
  m["chain.burn_in"] = std::to_string(chain.burn_in);
  m["chain.draws"] = std::to_string(chain.draws);
  m["chain.init"] = to_string(chain.init);
  m["chain.init_graph"] = join(init_graph_indices, [](std::size_t i) { return std::to_string(i); });
  m["chain.max_size"] = chain.max_size ? std::to_string(*chain.max_size) : "auto";
  m["chain.move_add"] = format_double(chain.moves.add);
  m["chain.move_remove"] = format_double(chain.moves.remove);
  m["chain.move_swap"] = format_double(chain.moves.swap);
  m["chain.jacobian"] = to_string(chain.jacobian);
  m["enet.l1_ratio"] = format_double(enet.l1_ratio);
  m["enet.cv_folds"] = std::to_string(enet.cv_folds);
  m["enet.tol"] = format_double(enet.tol);
  m["enet.max_iter"] = std::to_string(enet.max_iter);
  m["enet.grid_size"] = std::to_string(enet.grid_size);
  m["enet.grid_ratio"] = format_double(enet.grid_ratio);
  m["enet.lambda_grid"] = join(enet.lambda_grid, format_double);
  m["sim.pattern"] = to_string(pattern);
  m["sim.p"] = std::to_string(p);
  m["sim.n"] = std::to_string(n);
  m["bench.design"] = design;
  m["bench.seeds"] = seeds ? std::to_string(*seeds) : "";
  m["bench.threads"] = std::to_string(threads);
  m["bench.methods"] = join(methods, [](Method x) { return to_string(x); });
  return m;
}

std::string RunConfig::serialize() const {
  const auto m = to_map();
  std::string out;
  for (const auto& key : config_keys()) out += key + " = " + m.at(key) + "\n";
  return out;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  const bool empty = v.empty();
  if (key == "command") command = parse_command(v);
  else if (key == "input") input_path = empty ? std::nullopt : std::optional<std::string>(v);
  else if (key == "truth") truth_path = empty ? std::nullopt : std::optional<std::string>(v);
  else if (key == "output_dir") output_dir = v;
  else if (key == "seed") seed = to_uint(key, v);
  else if (key == "difference") difference = to_bool(key, v);
  else if (key == "dot_threshold") dot_threshold = to_double(key, v);
  else if (key == "cond1_threshold") cond1_threshold = to_double(key, v);
  else if (key == "eas.epsilon_mode") eas.epsilon_mode = parse_epsilon_mode(v);
  else if (key == "eas.rho") eas.rho = to_double(key, v);
  else if (key == "eas.d") {
    auto_d = v == "auto";
    eas.d = auto_d ? 0.0 : to_double(key, v);
  } else if (key == "eas.c_bound") eas.c_bound = to_double(key, v);
  else if (key == "eas.g_o_size_hint") {
    eas.g_o_size_hint = empty ? std::nullopt : std::optional<std::size_t>(to_uint(key, v));
  } else if (key == "eas.epsilon_value") eas.epsilon_value = to_double(key, v);
  else if (key == "chain.steps") chain.steps = to_uint(key, v);
  else if (key == "chain.burn_in") chain.burn_in = to_uint(key, v);
  else if (key == "chain.draws") chain.draws = to_uint(key, v);
  else if (key == "chain.init") chain.init = parse_init_kind(v);
  else if (key == "chain.init_graph") {
    // Resolved against p once the data is known.
    init_graph_indices.clear();
    for (const auto& s : split_list(v)) init_graph_indices.push_back(to_uint(key, s));
  } else if (key == "chain.max_size") {
    chain.max_size = v == "auto" ? std::nullopt : std::optional<std::size_t>(to_uint(key, v));
  } else if (key == "chain.move_add") chain.moves.add = to_double(key, v);
  else if (key == "chain.move_remove") chain.moves.remove = to_double(key, v);
  else if (key == "chain.move_swap") chain.moves.swap = to_double(key, v);
  else if (key == "chain.jacobian") chain.jacobian = parse_jacobian_mode(v);
  else if (key == "enet.l1_ratio") enet.l1_ratio = to_double(key, v);
  else if (key == "enet.cv_folds") enet.cv_folds = to_uint(key, v);
  else if (key == "enet.tol") enet.tol = to_double(key, v);
  else if (key == "enet.max_iter") enet.max_iter = to_uint(key, v);
  else if (key == "enet.grid_size") enet.grid_size = to_uint(key, v);
  else if (key == "enet.grid_ratio") enet.grid_ratio = to_double(key, v);
  else if (key == "enet.lambda_grid") {
    enet.lambda_grid.clear();
    for (const auto& s : split_list(v)) enet.lambda_grid.push_back(to_double(key, s));
  } else if (key == "sim.pattern") {
    try {
      pattern = parse_pattern(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "sim.p") p = to_uint(key, v);
  else if (key == "sim.n") n = to_uint(key, v);
  else if (key == "bench.design") design = v;
  else if (key == "bench.seeds") seeds = empty ? std::nullopt : std::optional<std::size_t>(to_uint(key, v));
  else if (key == "bench.threads") threads = to_uint(key, v);
  else if (key == "bench.methods") {
    methods.clear();
    for (const auto& s : split_list(v)) methods.push_back(parse_method(s));
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  eas.validate();
  enet.validate();
  if (chain.steps < 1 || chain.burn_in >= chain.steps) throw ConfigError("chain.burn_in must be below chain.steps");
  if (chain.draws < 1) throw ConfigError("chain.draws must be positive");
  if (!(dot_threshold >= 0.0 && dot_threshold <= 1.0)) throw ConfigError("dot_threshold must lie in [0, 1]");
  if (p < 2 && command == Command::Simulate) throw ConfigError("sim.p must be at least 2");
  if (n < 1 && command == Command::Simulate) throw ConfigError("sim.n must be positive");
  if (methods.empty()) throw ConfigError("bench.methods is empty");
}

ChainConfig RunConfig::chain_for(std::size_t dim) const {
  ChainConfig out = chain;
  out.seed = seed;
  if (!init_graph_indices.empty()) {
    try {
      out.init_graph = Graph::from_vec_indices(dim, init_graph_indices);
    } catch (const std::out_of_range& e) {
      throw ConfigError(std::string("chain.init_graph: ") + e.what());
    }
  }
  return out;
}

RunConfig parse_run_config(const std::string& text, RunConfig base) {
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), std::move(base));
}

}  // namespace easvar
