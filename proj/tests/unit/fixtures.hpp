#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "sas/rollout.hpp"

namespace fixtures {

inline sas::Rollout rollout(std::string id, double reward,
                            std::initializer_list<std::pair<const char*, double>> tokens,
                            std::string prompt = "p") {
  sas::Rollout r;
  r.prompt_id = std::move(prompt);
  r.rollout_id = std::move(id);
  r.reward = reward;
  for (const auto& [text, lp] : tokens) r.tokens.push_back({-1, text, lp});
  return r;
}

// One token per character group, every token logprob -0.5.
inline sas::Rollout from_pieces(const std::vector<std::string>& pieces, double reward = 1.0) {
  sas::Rollout r;
  r.prompt_id = "p";
  r.rollout_id = "r";
  r.reward = reward;
  for (const auto& p : pieces) r.tokens.push_back({-1, p, -0.5});
  return r;
}

// Four steps with mean logprobs -0.5, -0.1, -0.9, -0.2.
inline sas::Rollout four_step(std::string id, double reward) {
  return rollout(std::move(id), reward,
                 {{"A", -0.25}, {" a", -0.75}, {"\n\n", -0.5}, {"B", -0.1}, {"\n\n", -0.1},
                  {"C", -0.9}, {" c", -0.8}, {"\n\n", -1.0}, {"D", -0.2}});
}

inline sas::RolloutGroup group(std::vector<sas::Rollout> rollouts, std::string prompt = "p") {
  sas::RolloutGroup g;
  g.prompt_id = std::move(prompt);
  g.rollouts = std::move(rollouts);
  return g;
}

inline sas::RolloutGroup with_rewards(const std::vector<double>& rewards) {
  std::vector<sas::Rollout> rs;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    rs.push_back(rollout("r" + std::to_string(i), rewards[i], {{"x", -0.1}, {"\n\n", -0.2}, {"y", -0.3}}));
  }
  return group(std::move(rs));
}

}  // namespace fixtures
