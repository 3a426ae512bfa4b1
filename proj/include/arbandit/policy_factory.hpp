#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "arbandit/policies.hpp"

namespace arb {

// Builds a policy from its roster kind and JSON hyperparameters.
//
//   kind         params
//   ar2          epoch_len, epoch_scale, c0, c1, superior_window (int or "all"),
//                explore_rule ("earliest_trigger" | "highest_ucb")
//   naive        -
//   etc          m
//   eps_greedy   epsilon
//   ucb1         -
//   rexp3        variation_budget, budget_scale
//   mod_ucb      delta
//   oracle       - (needs the trajectory)
//
// Unknown kinds or keys, and out-of-range values, throw std::invalid_argument.
std::unique_ptr<Policy> make_policy(const std::string& kind, const nlohmann::json& params,
                                    const Trajectory* trajectory = nullptr);

std::vector<std::string> policy_kinds();

}  // namespace arb
