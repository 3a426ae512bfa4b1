#include <bit>
#include <fstream>
#include <set>

#include "arbandit/harness.hpp"
#include "arbandit/policy_factory.hpp"

namespace arb {
namespace {

using nlohmann::json;

void require_known_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
}

template <typename T>
T field(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::size_t count_field(const json& j, const char* key, std::size_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

void validate_entry(const RosterEntry& e) {
  if (e.name.empty()) throw ConfigError("roster entry without a name");
  if (e.kind == "oracle") {
    if (!e.params.empty() || !e.grid.empty()) throw ConfigError("oracle takes no parameters");
    return;
  }
  try {
    make_policy(e.kind, e.params);
    for (const auto& g : e.grid) {
      if (!g.is_object()) throw std::invalid_argument("grid points must be objects");
      json merged = e.params;
      merged.update(g);
      make_policy(e.kind, merged);
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigError("roster entry '" + e.name + "': " + err.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  const std::string where = "config";
  require_known_keys(j,
                     {"arms", "horizon", "instances", "tuning_instances", "alpha_law", "sigma_law",
                      "boundary", "alpha_noise_pct", "sigma_upper_bound", "degenerate_threshold",
                      "master_seed", "threads", "roster", "output_dir"},
                     where);
  ExperimentConfig c;
  c.arms = count_field(j, "arms", c.arms, where);
  c.horizon = count_field(j, "horizon", c.horizon, where);
  c.instances = count_field(j, "instances", c.instances, where);
  c.tuning_instances = count_field(j, "tuning_instances", c.tuning_instances, where);
  c.boundary = field<double>(j, "boundary", c.boundary, where);
  c.alpha_noise_pct = field<double>(j, "alpha_noise_pct", c.alpha_noise_pct, where);
  c.degenerate_threshold = field<double>(j, "degenerate_threshold", c.degenerate_threshold, where);
  c.master_seed = field<std::uint64_t>(j, "master_seed", c.master_seed, where);
  c.threads = count_field(j, "threads", c.threads, where);
  c.output_dir = field<std::string>(j, "output_dir", c.output_dir, where);
  if (j.contains("sigma_upper_bound") && !j.at("sigma_upper_bound").is_null())
    c.sigma_upper_bound = field<double>(j, "sigma_upper_bound", 0.5, where);

  if (j.contains("alpha_law")) {
    const json& a = j.at("alpha_law");
    require_known_keys(a, {"target_mean", "concentration", "clip"}, "alpha_law");
    c.alpha_law.target_mean = field<double>(a, "target_mean", c.alpha_law.target_mean, "alpha_law");
    c.alpha_law.concentration =
        field<double>(a, "concentration", c.alpha_law.concentration, "alpha_law");
    if (a.contains("clip")) {
      const auto clip = field<std::vector<double>>(a, "clip", {}, "alpha_law");
      if (clip.size() != 2) throw ConfigError("alpha_law.clip must be [lo, hi]");
      c.alpha_law.clip_lo = clip[0];
      c.alpha_law.clip_hi = clip[1];
    }
  }
  if (j.contains("sigma_law")) {
    const json& s = j.at("sigma_law");
    require_known_keys(s, {"low", "high"}, "sigma_law");
    c.sigma_law.low = field<double>(s, "low", c.sigma_law.low, "sigma_law");
    c.sigma_law.high = field<double>(s, "high", c.sigma_law.high, "sigma_law");
  }
  if (!j.contains("roster") || !j.at("roster").is_array() || j.at("roster").empty())
    throw ConfigError("config.roster must be a non-empty array");
  std::set<std::string> names;
  for (const json& r : j.at("roster")) {
    require_known_keys(r, {"name", "kind", "params", "grid"}, "roster entry");
    RosterEntry e;
    e.kind = field<std::string>(r, "kind", "", "roster entry");
    e.name = field<std::string>(r, "name", e.kind, "roster entry");
    if (r.contains("params")) e.params = r.at("params");
    if (r.contains("grid")) {
      if (!r.at("grid").is_array()) throw ConfigError("roster entry '" + e.name + "': grid must be an array");
      for (const json& g : r.at("grid")) e.grid.push_back(g);
    }
    if (!names.insert(e.name).second) throw ConfigError("duplicate roster name '" + e.name + "'");
    c.roster.push_back(std::move(e));
  }

  if (c.arms < 1) throw ConfigError("arms must be >= 1");
  if (c.instances < 1) throw ConfigError("instances must be >= 1");
  if (c.horizon < c.arms + 1) throw ConfigError("horizon must be >= arms + 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  const AlphaLaw& a = c.alpha_law;
  if (!(a.clip_lo > 0.0 && a.clip_lo < a.clip_hi && a.clip_hi < 1.0))
    throw ConfigError("alpha_law.clip must satisfy 0 < lo < hi < 1");
  if (!(a.target_mean > 0.0 && a.target_mean < 1.0))
    throw ConfigError("alpha_law.target_mean must lie in (0, 1)");
  if (!(a.concentration > 0.0)) throw ConfigError("alpha_law.concentration must be positive");
  if (!(c.sigma_law.low >= 0.0 && c.sigma_law.low < c.sigma_law.high && c.sigma_law.high < 1.0))
    throw ConfigError("sigma_law must satisfy 0 <= low < high < 1");
  if (!(c.boundary > 0.0)) throw ConfigError("boundary must be positive");
  if (!(c.alpha_noise_pct >= 0.0)) throw ConfigError("alpha_noise_pct must be >= 0");
  if (c.sigma_upper_bound && !(*c.sigma_upper_bound > 0.0 && *c.sigma_upper_bound < 1.0))
    throw ConfigError("sigma_upper_bound must lie in (0, 1)");
  if (!(c.degenerate_threshold >= 0.0)) throw ConfigError("degenerate_threshold must be >= 0");
  for (const auto& e : c.roster) validate_entry(e);
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json roster = json::array();
  for (const auto& e : c.roster) {
    json g = json::array();
    for (const auto& p : e.grid) g.push_back(p);
    roster.push_back({{"name", e.name}, {"kind", e.kind}, {"params", e.params}, {"grid", g}});
  }
  json j = {
      {"arms", c.arms},
      {"horizon", c.horizon},
      {"instances", c.instances},
      {"tuning_instances", c.tuning_instances},
      {"alpha_law",
       {{"target_mean", c.alpha_law.target_mean},
        {"concentration", c.alpha_law.concentration},
        {"clip", {c.alpha_law.clip_lo, c.alpha_law.clip_hi}}}},
      {"sigma_law", {{"low", c.sigma_law.low}, {"high", c.sigma_law.high}}},
      {"boundary", c.boundary},
      {"alpha_noise_pct", c.alpha_noise_pct},
      {"sigma_upper_bound", c.sigma_upper_bound ? json(*c.sigma_upper_bound) : json(nullptr)},
      {"degenerate_threshold", c.degenerate_threshold},
      {"master_seed", c.master_seed},
      {"threads", c.threads},
      {"roster", roster},
      {"output_dir", c.output_dir},
  };
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("config") && j.contains("command")) j = j.at("config");
  return parse_config(j);
}

std::vector<RosterEntry> canonical_roster() {
  std::vector<RosterEntry> r;
  r.push_back({"AR2", "ar2",
               {{"superior_window", "all"}, {"explore_rule", "highest_ucb"}},
               {{{"c1", 0.0625}}, {{"c1", 0.125}}, {{"c1", 0.25}}, {{"c1", 0.375}}, {{"c1", 0.5}},
                {{"c1", 0.75}}, {{"c1", 1.0}}, {{"c1", 2.0}}, {{"c1", 4.0}}}});
  r.push_back({"ETC", "etc", json::object(),
               {{{"m", 1}}, {{"m", 2}}, {{"m", 5}}, {{"m", 10}}, {{"m", 25}}, {{"m", 50}}, {{"m", 100}}}});
  r.push_back({"Rexp3", "rexp3", json::object(),
               {{{"budget_scale", 0.001}}, {{"budget_scale", 0.01}}, {{"budget_scale", 0.1}},
                {{"budget_scale", 1.0}}, {{"budget_scale", 10.0}}}});
  r.push_back({"eps-greedy", "eps_greedy", {{"epsilon", 0.1}}, {}});
  r.push_back({"UCB", "ucb1", json::object(), {}});
  r.push_back({"mod-UCB", "mod_ucb", json::object(),
               {{{"delta", 0.001}}, {{"delta", 0.01}}, {{"delta", 0.05}}, {{"delta", 0.1}},
                {{"delta", 0.2}}, {{"delta", 0.5}}, {{"delta", 0.9}}, {{"delta", 1.0}}}});
  r.push_back({"naive", "naive", json::object(), {}});
  return r;
}

ExperimentConfig canonical_config(double target_mean, std::size_t arms) {
  ExperimentConfig c;
  c.arms = arms;
  c.horizon = 10000;
  c.instances = 100;
  c.tuning_instances = 100;
  c.alpha_law.target_mean = target_mean;
  c.roster = canonical_roster();
  return c;
}

std::uint64_t instance_seed(const ExperimentConfig& config, std::size_t index, bool tuning) {
  return derive_seed(config.master_seed, tuning ? Stream::tuning_instance : Stream::instance,
                     {std::bit_cast<std::uint64_t>(config.alpha_law.target_mean), config.arms, index});
}

}  // namespace arb
