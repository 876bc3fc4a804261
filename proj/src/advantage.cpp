#include "sas/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sas/errors.hpp"

namespace sas {

GroupRewardStats group_stats(std::span<const double> rewards, double epsilon) {
  if (rewards.size() < kMinGroupSize) {
    throw InputError("group needs at least 2 rewards, got " + std::to_string(rewards.size()));
  }
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  const double n = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double r : rewards) sum += r;
  const double mean = sum / n;
  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  const double std = std::sqrt(sq / n);
  return {mean, std, std < epsilon};
}

const char* to_string(AdvantageStage stage) {
  return stage == AdvantageStage::kRaw ? "raw" : "selected";
}

std::vector<double> rollout_advantages(std::span<const double> rewards, double epsilon) {
  const auto stats = group_stats(rewards, epsilon);
  std::vector<double> out(rewards.size(), 0.0);
  if (stats.degenerate) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    out[i] = (rewards[i] - stats.mean) / stats.std;
  }
  return out;
}

AdvantageTensor grpo_advantages(const RolloutGroup& group, double epsilon) {
  const auto rewards = group.rewards();
  const auto per_rollout = rollout_advantages(rewards, epsilon);
  AdvantageTensor tensor;
  tensor.stage = AdvantageStage::kRaw;
  tensor.per_rollout.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    tensor.per_rollout.emplace_back(group.rollouts[i].tokens.size(), per_rollout[i]);
  }
  return tensor;
}

double length_aware_reward(double task_reward, std::size_t length,
                           const LengthRewardConfig& config) {
  if (!(config.lambda >= 0.0)) throw InputError("lambda must be >= 0");
  if (config.shape == PenaltyShape::kBudgetHinge && config.budget == 0) {
    throw InputError("budget-hinge penalty needs a positive budget");
  }
  const double len = static_cast<double>(length);
  switch (config.shape) {
    case PenaltyShape::kLinear:
      return task_reward - config.lambda * len;
    case PenaltyShape::kBudgetHinge: {
      const double over = std::max(0.0, len - static_cast<double>(config.budget));
      return task_reward - config.lambda * over;
    }
  }
  return task_reward;
}

}  // namespace sas
