#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sas/rollout.hpp"

namespace sas {

inline constexpr double kDefaultStdEpsilon = 1e-8;

struct GroupRewardStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  bool degenerate = false;
};

// Throws InputError when fewer than two rewards are given or epsilon <= 0.
GroupRewardStats group_stats(std::span<const double> rewards,
                             double epsilon = kDefaultStdEpsilon);

enum class AdvantageStage { kRaw, kSelected };

const char* to_string(AdvantageStage stage);

struct AdvantageTensor {
  std::vector<std::vector<double>> per_rollout;
  AdvantageStage stage = AdvantageStage::kRaw;

  bool operator==(const AdvantageTensor&) const = default;
};

// Group-relative advantages (r_i - mean) / std broadcast to every token of
// rollout i. A degenerate group yields an all-zero tensor.
AdvantageTensor grpo_advantages(const RolloutGroup& group,
                                double epsilon = kDefaultStdEpsilon);

// Per-rollout scalar advantages, before broadcasting.
std::vector<double> rollout_advantages(std::span<const double> rewards,
                                       double epsilon = kDefaultStdEpsilon);

enum class PenaltyShape { kLinear, kBudgetHinge };

struct LengthRewardConfig {
  double lambda = 0.0;
  PenaltyShape shape = PenaltyShape::kLinear;
  std::size_t budget = 0;  // only read by kBudgetHinge
};

// Task reward minus lambda * g(length). This is the length-aware baseline; the
// selection pipeline itself never uses it.
double length_aware_reward(double task_reward, std::size_t length,
                           const LengthRewardConfig& config);

}  // namespace sas
