#include "arbandit/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "arbandit/bounds.hpp"
#include "arbandit/env.hpp"
#include "arbandit/harness.hpp"

namespace arb {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GridArg {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

GridArg parse_grid(const std::string& text) {
  GridArg g;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || !in.eof())
    throw ConfigError("grid must look like LO:HI:STEP, got '" + text + "'");
  if (!(g.step > 0.0) || g.hi < g.lo) throw ConfigError("grid needs STEP > 0 and HI >= LO");
  return g;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number list: '" + text + "'");
    }
  }
  if (values.empty()) throw ConfigError("empty number list");
  return values;
}

std::string render(const auto& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json tuning_json(const ExperimentResult& r) {
  json cells = json::array();
  for (const auto& t : r.tuning) {
    json means = json::array();
    for (double m : t.candidate_means) means.push_back(std::isnan(m) ? json(nullptr) : json(m));
    cells.push_back({{"policy", t.name}, {"chosen", t.chosen}, {"candidate_means", means}});
  }
  return cells;
}

json cell_json(const ExperimentConfig& config, const ExperimentResult& r) {
  return {{"regime", r.regime},
          {"k", r.arms},
          {"config_hash", format_double(static_cast<double>(fnv1a(to_json(config).dump())))},
          {"tuning", tuning_json(r)},
          {"instance_seeds", r.instance_seeds},
          {"excluded_instances", r.excluded_instances}};
}

void write_manifest(const fs::path& path, json manifest, const std::vector<std::string>& args,
                    double wall_clock) {
  manifest["args"] = args;
  manifest["wall_clock_seconds"] = wall_clock;
  write_text_file(path, manifest.dump(2) + "\n");
}

std::vector<std::string> args_without_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

// --- subcommands -----------------------------------------------------------

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir, std::optional<std::size_t> threads,
                 const std::vector<std::string>& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig config = load_config(config_path);
  if (seed) config.master_seed = *seed;
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (threads) config.threads = *threads;
  const fs::path dir = config.output_dir;

  const ExperimentResult result = run_experiment(config);
  write_text_file(dir / "results.csv", render([&](std::ostream& os) {
                    write_results_csv(os, {result});
                  }));
  json manifest = manifest_base("simulate");
  manifest["config"] = to_json(config);
  manifest["master_seed"] = config.master_seed;
  manifest["cells"] = json::array({cell_json(config, result)});
  write_manifest(dir / "manifest.json", manifest, args_without_out(args), seconds_since(start));
  out << "wrote " << (dir / "results.csv").string() << '\n';
  return kExitOk;
}

struct SweepOptions {
  std::uint64_t seed = 20240501;
  std::size_t threads = 1;
  std::size_t instances = 100;
  std::size_t tuning_instances = 100;
  std::size_t horizon = 10000;
};

ExperimentConfig sweep_config(const SweepOptions& o, double regime, std::size_t k) {
  ExperimentConfig c = canonical_config(regime, k);
  c.master_seed = o.seed;
  c.threads = o.threads;
  c.instances = o.instances;
  c.tuning_instances = o.tuning_instances;
  c.horizon = o.horizon;
  return parse_config(to_json(c));
}

int cmd_table1(const std::string& regime, const SweepOptions& o, const std::string& out_dir,
               const std::vector<std::string>& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> regimes;
  if (regime == "0.4" || regime == "both") regimes.push_back(0.4);
  if (regime == "0.9" || regime == "both") regimes.push_back(0.9);
  if (regimes.empty()) throw ConfigError("--regime must be 0.4, 0.9 or both");

  std::vector<ExperimentResult> results;
  json cells = json::array();
  for (double a : regimes) {
    for (std::size_t k : {2, 4, 6}) {
      const ExperimentConfig config = sweep_config(o, a, k);
      results.push_back(run_experiment(config));
      cells.push_back(cell_json(config, results.back()));
      out << "regime " << a << " k " << k << " done\n";
    }
  }
  const fs::path dir = out_dir;
  write_text_file(dir / "results.csv", render([&](std::ostream& os) { write_results_csv(os, results); }));
  write_text_file(dir / "table1.csv",
                  render([&](std::ostream& os) { write_table_csv(os, results, "mean"); }));
  write_text_file(dir / "table1_std.csv",
                  render([&](std::ostream& os) { write_table_csv(os, results, "std"); }));
  json manifest = manifest_base("table1");
  manifest["master_seed"] = o.seed;
  manifest["config"] = to_json(sweep_config(o, regimes.front(), 2));
  manifest["cells"] = cells;
  write_manifest(dir / "manifest.json", manifest, args_without_out(args), seconds_since(start));
  out << "wrote " << (dir / "table1.csv").string() << '\n';
  return kExitOk;
}

int cmd_robustness(const std::string& p_list, double regime, std::size_t k, const SweepOptions& o,
                   const std::string& out_dir, const std::vector<std::string>& args,
                   std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> levels = parse_list(p_list);
  for (double p : levels)
    if (p < 0.0) throw ConfigError("--p levels must be >= 0");

  // Same instances and tuning as table1; only the three AR-aware policies.
  ExperimentConfig base = sweep_config(o, regime, k);
  std::vector<RosterEntry> roster;
  for (const auto& e : base.roster)
    if (e.name == "AR2" || e.name == "eps-greedy" || e.name == "mod-UCB") roster.push_back(e);
  base.roster = roster;
  base.alpha_noise_pct = 0.0;
  const std::vector<TuningOutcome> tuned = tune_roster(base);

  std::vector<RobustnessRow> rows;
  std::vector<ExperimentResult> results;
  for (double p : levels) {
    ExperimentConfig config = base;
    config.alpha_noise_pct = p;
    results.push_back(evaluate_roster(config, tuned));
    for (const auto& pr : results.back().policies)
      rows.push_back({pr.name, p, pr.normalized, pr.stats});
    out << "p " << p << " done\n";
  }
  // Group rows by policy for readability.
  std::stable_sort(rows.begin(), rows.end(), [&](const RobustnessRow& a, const RobustnessRow& b) {
    auto rank = [&](const std::string& n) {
      for (std::size_t i = 0; i < roster.size(); ++i)
        if (roster[i].name == n) return i;
      return roster.size();
    };
    return rank(a.policy) < rank(b.policy);
  });
  const fs::path dir = out_dir;
  write_text_file(dir / "robustness.csv",
                  render([&](std::ostream& os) { write_robustness_csv(os, rows); }));
  json manifest = manifest_base("robustness");
  manifest["master_seed"] = o.seed;
  manifest["config"] = to_json(base);
  manifest["p_levels"] = levels;
  manifest["tuning"] = tuning_json(results.front());
  write_manifest(dir / "manifest.json", manifest, args_without_out(args), seconds_since(start));
  out << "wrote " << (dir / "robustness.csv").string() << '\n';
  return kExitOk;
}

fs::path manifest_path_for(const fs::path& file) {
  fs::path m = file;
  m += ".manifest.json";
  return m;
}

int cmd_bounds(std::size_t k, double sigma, double alpha, double scale,
               const std::string& alpha_grid, const std::string& sigma_grid, std::size_t nodes,
               const std::string& out_file, const std::vector<std::string>& args,
               std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (k < 2) throw ConfigError("--k must be >= 2");
  const QuadratureSpec quad{nodes, nodes};
  std::vector<BoundCurvePoint> points;
  try {
    if (!sigma_grid.empty()) {
      const GridArg g = parse_grid(sigma_grid);
      for (double s : make_grid(g.lo, g.hi, g.step))
        points.push_back(bound_point(k, ArParams(alpha, s), scale, quad));
    } else {
      const GridArg g = parse_grid(alpha_grid);
      for (double a : make_grid(g.lo, g.hi, g.step))
        points.push_back(bound_point(k, ArParams(a, sigma), scale, quad));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  const fs::path file = out_file;
  write_text_file(file, render([&](std::ostream& os) { write_bound_curve_csv(os, points); }));
  json manifest = manifest_base("bounds");
  write_manifest(manifest_path_for(file), manifest, args_without_out(args), seconds_since(start));
  out << "wrote " << file.string() << '\n';
  return kExitOk;
}

int cmd_stationary(double alpha, double sigma, double boundary, std::size_t grid,
                   const std::string& out_file, const std::vector<std::string>& args,
                   std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (grid < 2) throw ConfigError("--grid must be >= 2");
  std::optional<ArParams> params;
  try {
    params.emplace(alpha, sigma, boundary);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<double> xs(grid);
  for (std::size_t j = 0; j < grid; ++j)
    xs[j] = -boundary + 2.0 * boundary * static_cast<double>(j) / static_cast<double>(grid - 1);
  xs.back() = boundary;
  std::vector<double> pdf(grid);
  stationary_pdf_grid(xs, *params, pdf);
  const fs::path file = out_file;
  write_text_file(file, render([&](std::ostream& os) {
                    os << "x,pdf,cdf\n";
                    for (std::size_t j = 0; j < grid; ++j)
                      os << format_double(xs[j]) << ',' << format_double(pdf[j]) << ','
                         << format_double(stationary_cdf(xs[j], *params)) << '\n';
                  }));
  json manifest = manifest_base("stationary");
  write_manifest(manifest_path_for(file), manifest, args_without_out(args), seconds_since(start));
  out << "wrote " << file.string() << '\n';
  return kExitOk;
}

int cmd_rerun(const std::string& manifest_path, const std::string& out, std::ostream& os,
              std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot open manifest " + manifest_path);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!m.contains("args") || !m.contains("command")) throw ConfigError("not an arbandit manifest");
  std::vector<std::string> args = m.at("args").get<std::vector<std::string>>();
  if (m.at("command") == "simulate") {
    // The embedded config (seed already resolved) replaces the original file.
    args = {"simulate", "--config", manifest_path};
  }
  args.push_back("--out");
  args.push_back(out);
  return run_cli(args, os, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic bandits with reflected AR-1 rewards", "arbandit"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<std::size_t> threads;
  auto* simulate = app.add_subcommand("simulate", "Run an experiment from a JSON config");
  simulate->add_option("--config", config_path, "Config or manifest JSON")->required();
  simulate->add_option("--seed", seed, "Override master_seed");
  simulate->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  simulate->add_option("--threads", threads, "Worker threads");

  SweepOptions sweep;
  std::string regime = "both";
  std::string sweep_out = "out/table1";
  auto* table1 = app.add_subcommand("table1", "Normalized-regret table over E[alpha] and k");
  table1->add_option("--regime", regime, "0.4, 0.9 or both")->capture_default_str();
  table1->add_option("--out", sweep_out, "Output directory")->capture_default_str();
  for (auto* sc : {table1}) {
    sc->add_option("--seed", sweep.seed, "Master seed")->capture_default_str();
    sc->add_option("--threads", sweep.threads, "Worker threads")->capture_default_str();
    sc->add_option("--instances", sweep.instances, "Instances per cell")->capture_default_str();
    sc->add_option("--tuning-instances", sweep.tuning_instances, "Tuning instances per cell")
        ->capture_default_str();
    sc->add_option("--horizon", sweep.horizon, "Rounds per run")->capture_default_str();
  }

  std::string p_list = "0,10,20";
  double robust_regime = 0.9;
  std::size_t robust_k = 6;
  std::string robust_out = "out/robustness";
  SweepOptions robust;
  auto* robustness = app.add_subcommand("robustness", "Noisy-alpha robustness study");
  robustness->add_option("--p", p_list, "Comma-separated noise levels in percent")
      ->capture_default_str();
  robustness->add_option("--regime", robust_regime, "E[alpha]")->capture_default_str();
  robustness->add_option("--k", robust_k, "Arm count")->capture_default_str();
  robustness->add_option("--out", robust_out, "Output directory")->capture_default_str();
  robustness->add_option("--seed", robust.seed, "Master seed")->capture_default_str();
  robustness->add_option("--threads", robust.threads, "Worker threads")->capture_default_str();
  robustness->add_option("--instances", robust.instances, "Instances")->capture_default_str();
  robustness->add_option("--tuning-instances", robust.tuning_instances, "Tuning instances")
      ->capture_default_str();
  robustness->add_option("--horizon", robust.horizon, "Rounds per run")->capture_default_str();

  std::size_t bounds_k = 5;
  double bounds_sigma = 0.2;
  double bounds_alpha = 0.9;
  double bounds_c = 0.4;
  std::string alpha_grid = "0.05:0.95:0.05";
  std::string sigma_grid;
  std::size_t nodes = 256;
  std::string bounds_out = "out/bounds.csv";
  auto* bounds = app.add_subcommand("bounds", "Lower/upper bound curves");
  bounds->add_option("--k", bounds_k, "Arm count")->capture_default_str();
  bounds->add_option("--sigma", bounds_sigma, "sigma for alpha sweeps")->capture_default_str();
  bounds->add_option("--alpha", bounds_alpha, "alpha for sigma sweeps")->capture_default_str();
  bounds->add_option("--C", bounds_c, "Scale constant")->capture_default_str();
  bounds->add_option("--alpha-grid", alpha_grid, "LO:HI:STEP")->capture_default_str();
  bounds->add_option("--sigma-grid", sigma_grid, "LO:HI:STEP; sweeps sigma instead of alpha");
  bounds->add_option("--nodes", nodes, "Gauss-Legendre nodes per dimension")->capture_default_str();
  bounds->add_option("--out", bounds_out, "Output CSV")->capture_default_str();

  double st_alpha = 0.9;
  double st_sigma = 0.8;
  double st_r = 1.0;
  std::size_t st_grid = 201;
  std::string st_out = "out/stationary.csv";
  auto* stationary = app.add_subcommand("stationary", "Stationary pdf and cdf on a grid");
  stationary->add_option("--alpha", st_alpha, "AR parameter")->capture_default_str();
  stationary->add_option("--sigma", st_sigma, "Noise level")->capture_default_str();
  stationary->add_option("--R", st_r, "Boundary")->capture_default_str();
  stationary->add_option("--grid", st_grid, "Grid points")->capture_default_str();
  stationary->add_option("--out", st_out, "Output CSV")->capture_default_str();

  std::string manifest_path;
  std::string rerun_out;
  auto* rerun = app.add_subcommand("rerun", "Re-run a command from its manifest");
  rerun->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  rerun->add_option("--out", rerun_out, "Output directory or file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "arbandit: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, seed, out_dir, threads, args, out);
    if (table1->parsed()) return cmd_table1(regime, sweep, sweep_out, args, out);
    if (robustness->parsed())
      return cmd_robustness(p_list, robust_regime, robust_k, robust, robust_out, args, out);
    if (bounds->parsed())
      return cmd_bounds(bounds_k, bounds_sigma, bounds_alpha, bounds_c, alpha_grid, sigma_grid,
                        nodes, bounds_out, args, out);
    if (stationary->parsed())
      return cmd_stationary(st_alpha, st_sigma, st_r, st_grid, st_out, args, out);
    if (rerun->parsed()) return cmd_rerun(manifest_path, rerun_out, out, err);
  } catch (const ConfigError& e) {
    err << "arbandit: config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "arbandit: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace arb
