// easvar: graph selection for VAR(1) models with epsilon-admissible subsets.
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "easvar/baselines.hpp"
#include "easvar/conditions.hpp"
#include "easvar/errors.hpp"
#include "easvar/estim.hpp"
#include "easvar/experiment.hpp"
#include "easvar/gimh.hpp"
#include "easvar/io.hpp"
#include "easvar/metrics.hpp"
#include "easvar/report.hpp"
#include "easvar/run_config.hpp"
#include "easvar/simulate.hpp"

namespace fs = std::filesystem;
using namespace easvar;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kParse = 2, kNumerical = 3, kConfig = 4 };

struct Cli {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::string> input;
  std::optional<std::string> truth;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  bool difference = false;
  std::optional<std::string> pattern;
  std::optional<std::size_t> p, n;
  std::optional<std::string> design;
  std::optional<std::size_t> seeds, threads, steps, burn_in, draws;
};

RunConfig build_config(Command command, const Cli& cli) {
  RunConfig cfg;
  if (!cli.config_path.empty()) cfg = load_run_config(cli.config_path);
  cfg.command = command;
  for (const auto& kv : cli.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (cli.input) cfg.input_path = cli.input;
  if (cli.truth) cfg.truth_path = cli.truth;
  if (cli.output_dir) cfg.output_dir = *cli.output_dir;
  if (cli.seed) cfg.seed = *cli.seed;
  if (cli.difference) cfg.difference = true;
  if (cli.pattern) cfg.set("sim.pattern", *cli.pattern);
  if (cli.p) cfg.p = *cli.p;
  if (cli.n) cfg.n = *cli.n;
  if (cli.design) cfg.design = *cli.design;
  if (cli.seeds) cfg.seeds = cli.seeds;
  if (cli.threads) cfg.threads = *cli.threads;
  if (cli.steps) cfg.chain.steps = *cli.steps;
  if (cli.burn_in) cfg.chain.burn_in = *cli.burn_in;
  if (cli.draws) cfg.chain.draws = *cli.draws;
  cfg.validate();
  return cfg;
}

const std::string& require_input(const RunConfig& cfg) {
  if (!cfg.input_path) throw ConfigError("an input CSV is required (--input)");
  return *cfg.input_path;
}

Matrix read_truth(const std::string& path, std::size_t p) {
  const CsvTable t = read_csv(path);
  if (static_cast<std::size_t>(t.values.rows()) != p || static_cast<std::size_t>(t.values.cols()) != p) {
    throw ParseError("truth matrix must be " + std::to_string(p) + " x " + std::to_string(p));
  }
  return t.values;
}

int run_simulate(const RunConfig& cfg) {
  const PatternDraw truth = generate_pattern(cfg.pattern, cfg.p, derive_seed(cfg.seed, 0));
  const TimeSeriesData data =
      simulate_var(truth.a, Vector::Ones(static_cast<Eigen::Index>(cfg.p)), cfg.n, derive_seed(cfg.seed, 1));
  fs::create_directories(cfg.output_dir);
  const auto names = default_names(cfg.p);
  const Matrix& s = data.series();
  export_csv((fs::path(cfg.output_dir) / "series.csv").string(), s.rightCols(s.cols() - 1), names);
  write_text((fs::path(cfg.output_dir) / "truth.csv").string(), format_csv(truth.a.transpose(), names));
  write_text((fs::path(cfg.output_dir) / "config.txt").string(), cfg.serialize());
  std::cout << "simulated " << to_string(cfg.pattern) << " p=" << cfg.p << " n=" << cfg.n
            << " |G_o|=" << truth.graph.size() << " -> " << cfg.output_dir << "\n";
  return kOk;
}

int run_select(const RunConfig& cfg) {
  std::vector<std::string> names;
  const TimeSeriesData data = ingest_csv(require_input(cfg), cfg.difference, &names);
  EasParams params = cfg.eas;
  ChainConfig chain = cfg.chain_for(data.p());
  if (cfg.auto_d || (chain.init == InitKind::BaselineGraph && !chain.init_graph)) {
    const EnetFit enet = enet_var(data, cfg.enet);
    if (cfg.auto_d) params.d = enet.graph.empty() ? 0.0 : calibrate_d(data, enet.graph);
    if (chain.init == InitKind::BaselineGraph && !chain.init_graph) chain.init_graph = enet.graph;
  }
  const ChainResult res = run_chain(data, params, chain);

  std::optional<Oracle> oracle;
  std::optional<ConditionReport> cond;
  Matrix a0;
  const Vector sigma0 = Vector::Ones(static_cast<Eigen::Index>(data.p()));
  Graph g_o;
  if (cfg.truth_path) {
    a0 = read_truth(*cfg.truth_path, data.p());
    g_o = support(a0);
    oracle = Oracle{a0, g_o};
    cond = check_conditions(data, params, cfg.cond1_threshold, &a0, &sigma0, &g_o);
  } else {
    cond = check_conditions(data, params, cfg.cond1_threshold);
  }
  // In-sample prediction errors of the model average.
  const MetricRecord metrics = compute_metrics(data, res.a_bma, oracle, &res);
  ReportContext ctx;
  ctx.config = &cfg;
  ctx.names = names;
  ctx.n = data.n();
  ctx.d = params.d;
  emit_report(res, metrics, cond, cfg.output_dir, ctx);
  std::cout << "MAP graph (vec indices):";
  for (std::size_t i : res.map_graph.vec_indices()) std::cout << " " << i;
  std::cout << "\nfrequency " << res.frequency(res.map_graph) << ", acceptance "
            << res.acceptance_rate << ", d = " << params.d << "\nreport -> " << cfg.output_dir << "\n";
  return kOk;
}

int run_check(const RunConfig& cfg) {
  const TimeSeriesData data = ingest_csv(require_input(cfg), cfg.difference);
  ConditionReport rep;
  if (cfg.truth_path) {
    const Matrix a0 = read_truth(*cfg.truth_path, data.p());
    const Vector sigma0 = Vector::Ones(static_cast<Eigen::Index>(data.p()));
    const Graph g_o = support(a0);
    rep = check_conditions(data, cfg.eas, cfg.cond1_threshold, &a0, &sigma0, &g_o);
  } else {
    rep = check_conditions(data, cfg.eas, cfg.cond1_threshold);
  }
  std::cout << to_json(rep).dump(2) << "\n";
  return kOk;
}

int run_bench(const RunConfig& cfg) {
  Design design = design_preset(cfg.design);
  if (cfg.seeds) design.seeds = *cfg.seeds;
  design.base_seed = cfg.seed;
  ExperimentOptions opt;
  opt.methods = cfg.methods;
  opt.eas = cfg.eas;
  opt.fixed_d = !cfg.auto_d;
  opt.chain = cfg.chain_for(design.p);
  opt.enet = cfg.enet;
  opt.cond1_threshold = cfg.cond1_threshold;
  opt.threads = cfg.threads;
  const ExperimentTable table = run_experiment(design, opt);
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  write_text((dir / "table.csv").string(), table.to_csv());
  write_text((dir / "table.txt").string(), table.to_text());
  nlohmann::json seeds = nlohmann::json::array();
  for (const SeedOutcome& s : table.seeds) {
    nlohmann::json j;
    j["index"] = s.index;
    j["seed"] = s.seed;
    j["oracle_size"] = s.oracle_size;
    if (s.d) j["d"] = *s.d;
    if (s.error) j["error"] = *s.error;
    if (s.conditions) j["conditions"] = to_json(*s.conditions);
    for (const auto& [m, r] : s.metrics) j["metrics"][to_string(m)] = to_json(r);
    seeds.push_back(j);
  }
  nlohmann::json out;
  out["schema_version"] = kSchemaVersion;
  nlohmann::json echo = nlohmann::json::object();
  for (const auto& [k, v] : cfg.to_map()) echo[k] = v;
  out["config"] = echo;
  out["seeds"] = seeds;
  write_text((dir / "seeds.json").string(), out.dump(2) + "\n");
  std::cout << table.to_text();
  return table.failures() == table.seeds.size() ? kNumerical : kOk;
}

int run_ingest(const RunConfig& cfg) {
  std::vector<std::string> names;
  const TimeSeriesData data = ingest_csv(require_input(cfg), cfg.difference, &names);
  const auto c1 = check_condition1(data, cfg.cond1_threshold);
  std::cout << "p = " << data.p() << ", n = " << data.n() << ", condition 1 value = " << c1.value
            << (c1.pass ? " (pass)" : " (fail)") << " vs " << c1.threshold << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph selection for VAR(1) models with epsilon-admissible subsets"};
  app.require_subcommand(1);
  Cli cli;

  auto common = [&cli](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "flat key = value config file");
    sub->add_option("--set", cli.overrides, "override a config key (key=value)");
    sub->add_option("-o,--output-dir", cli.output_dir, "output directory");
    sub->add_option("--seed", cli.seed, "master seed");
  };

  auto* sim = app.add_subcommand("simulate", "simulate a VAR(1) series from a pattern");
  common(sim);
  sim->add_option("--pattern", cli.pattern, "band, cluster, hub, random, scale-free");
  sim->add_option("--p", cli.p, "dimension");
  sim->add_option("--n", cli.n, "number of transitions");

  auto* sel = app.add_subcommand("select", "run the graph sampler on a CSV series");
  common(sel);
  sel->add_option("--input", cli.input, "CSV, rows = time");
  sel->add_option("--truth", cli.truth, "CSV of the true transition matrix (optional)");
  sel->add_flag("--difference", cli.difference, "first-difference the series");
  sel->add_option("--steps", cli.steps, "chain steps");
  sel->add_option("--burn-in", cli.burn_in, "burn-in steps");
  sel->add_option("--draws", cli.draws, "importance draws per mass estimate");

  auto* chk = app.add_subcommand("check", "evaluate Conditions 1-3");
  common(chk);
  chk->add_option("--input", cli.input, "CSV, rows = time");
  chk->add_option("--truth", cli.truth, "CSV of the true transition matrix (optional)");
  chk->add_flag("--difference", cli.difference, "first-difference the series");

  auto* bench = app.add_subcommand("bench", "run a simulation design");
  common(bench);
  bench->add_option("--design", cli.design, "table1, band-p10, band-p30");
  bench->add_option("--seeds", cli.seeds, "number of data sets");
  bench->add_option("--threads", cli.threads, "worker threads (0 = all cores)");
  bench->add_option("--steps", cli.steps, "chain steps");
  bench->add_option("--burn-in", cli.burn_in, "burn-in steps");
  bench->add_option("--draws", cli.draws, "importance draws per mass estimate");

  auto* ing = app.add_subcommand("ingest", "parse a CSV and report its shape");
  common(ing);
  ing->add_option("--input", cli.input, "CSV, rows = time");
  ing->add_flag("--difference", cli.difference, "first-difference the series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (sim->parsed()) return run_simulate(build_config(Command::Simulate, cli));
    if (sel->parsed()) return run_select(build_config(Command::Select, cli));
    if (chk->parsed()) return run_check(build_config(Command::Check, cli));
    if (bench->parsed()) return run_bench(build_config(Command::Bench, cli));
    if (ing->parsed()) return run_ingest(build_config(Command::Ingest, cli));
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
