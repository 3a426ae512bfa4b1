#include <set>

#include "arbandit/policy_factory.hpp"

namespace arb {
namespace {

void check_keys(const std::string& kind, const nlohmann::json& params,
                const std::set<std::string>& allowed) {
  if (!params.is_object()) throw std::invalid_argument(kind + ": params must be an object");
  for (const auto& [key, value] : params.items()) {
    if (!allowed.contains(key)) throw std::invalid_argument(kind + ": unknown parameter '" + key + "'");
    if (value.is_null()) throw std::invalid_argument(kind + ": parameter '" + key + "' is null");
  }
}

double number(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

std::size_t count(const nlohmann::json& params, const char* key, std::size_t fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw std::invalid_argument(std::string("parameter '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

class ScaledRexp3 final : public Policy {
 public:
  ScaledRexp3(double budget, double scale) : budget_(budget), scale_(scale), inner_(budget) {}
  std::string name() const override { return inner_.name(); }
  void reset(std::size_t k, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override {
    if (budget_ <= 0.0) {
      double a = 0.0, s = 0.0;
      for (const auto& p : params) a += p.alpha(), s += p.sigma();
      const double n = static_cast<double>(params.size());
      inner_ = Rexp3Policy(scale_ * static_cast<double>(horizon) * (a / n) * (s / n));
    }
    inner_.reset(k, horizon, params, seed);
  }
  std::size_t select_arm(std::size_t t) override { return inner_.select_arm(t); }
  void observe(std::size_t t, std::size_t arm, double r) override { inner_.observe(t, arm, r); }

 private:
  double budget_;
  double scale_;
  Rexp3Policy inner_;
};

}  // namespace

std::vector<std::string> policy_kinds() {
  return {"ar2", "naive", "etc", "eps_greedy", "ucb1", "rexp3", "mod_ucb", "oracle"};
}

std::unique_ptr<Policy> make_policy(const std::string& kind, const nlohmann::json& params,
                                    const Trajectory* trajectory) {
  const nlohmann::json p = params.is_null() ? nlohmann::json::object() : params;
  if (kind == "ar2") {
    check_keys(kind, p, {"epoch_len", "epoch_scale", "c0", "c1", "superior_window", "explore_rule"});
    Ar2Config cfg;
    cfg.epoch_len = count(p, "epoch_len", 0);
    cfg.epoch_scale = number(p, "epoch_scale", 1.0);
    cfg.c0 = number(p, "c0", cfg.c0);
    cfg.c1 = number(p, "c1", cfg.c1);
    if (p.contains("superior_window")) {
      const auto& w = p.at("superior_window");
      if (w.is_string()) {
        if (w.get<std::string>() != "all")
          throw std::invalid_argument("ar2: superior_window must be an integer or \"all\"");
        cfg.superior_window = 0;
      } else {
        cfg.superior_window = count(p, "superior_window", 2);
        if (cfg.superior_window < 2) throw std::invalid_argument("ar2: superior_window must be >= 2");
      }
    }
    if (p.contains("explore_rule")) {
      const auto rule = p.at("explore_rule").get<std::string>();
      if (rule == "earliest_trigger") {
        cfg.explore_rule = ExploreRule::earliest_trigger;
      } else if (rule == "highest_ucb") {
        cfg.explore_rule = ExploreRule::highest_ucb;
      } else {
        throw std::invalid_argument("ar2: explore_rule must be earliest_trigger or highest_ucb");
      }
    }
    return std::make_unique<Ar2Policy>(cfg);
  }
  if (kind == "naive") {
    check_keys(kind, p, {});
    return std::make_unique<NaivePolicy>();
  }
  if (kind == "etc") {
    check_keys(kind, p, {"m"});
    return std::make_unique<EtcPolicy>(count(p, "m", 25));
  }
  if (kind == "eps_greedy") {
    check_keys(kind, p, {"epsilon"});
    return std::make_unique<EpsGreedyPolicy>(number(p, "epsilon", 0.1));
  }
  if (kind == "ucb1") {
    check_keys(kind, p, {});
    return std::make_unique<Ucb1Policy>();
  }
  if (kind == "rexp3") {
    check_keys(kind, p, {"variation_budget", "budget_scale"});
    const double budget = number(p, "variation_budget", 0.0);
    const double scale = number(p, "budget_scale", 1.0);
    if (!(scale > 0.0)) throw std::invalid_argument("rexp3: budget_scale must be positive");
    return std::make_unique<ScaledRexp3>(budget, scale);
  }
  if (kind == "mod_ucb") {
    check_keys(kind, p, {"delta"});
    return std::make_unique<ModUcbPolicy>(number(p, "delta", 0.1));
  }
  if (kind == "oracle") {
    check_keys(kind, p, {});
    if (trajectory == nullptr) throw std::invalid_argument("oracle: needs a trajectory");
    return std::make_unique<OraclePolicy>(*trajectory);
  }
  throw std::invalid_argument("unknown policy kind '" + kind + "'");
}

}  // namespace arb
