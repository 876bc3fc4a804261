#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sas/selection.hpp"
#include "sas/sim/environment.hpp"
#include "sas/sim/policy.hpp"

namespace sas::sim {

struct TrainConfig {
  std::size_t group_size = 8;
  std::size_t tasks_per_step = 16;
  std::size_t context_budget = 32;
  SelectionMode mode = SelectionMode::kSas;
  double ratio = kDefaultSelectionRatio;
  double learn_rate = 1.0;
  double clip_epsilon = 0.2;
  double kl_coeff = 1e-3;
  std::size_t update_epochs = 2;
  std::size_t total_steps = 300;
  std::size_t eval_every = 10;
  std::size_t eval_tasks = 256;
  double std_epsilon = kDefaultStdEpsilon;
  std::uint64_t seed = 0;
  // Overrides the verifier for every training rollout; used to build
  // environments where every group is degenerate.
  std::optional<double> forced_reward;
  EnvConfig env;
};

// Throws InputError on inconsistent settings.
void validate_train_config(const TrainConfig& config);

struct DynamicsRecord {
  std::size_t step = 0;
  double mean_length = 0.0;      // eval rollouts, tokens
  double accuracy = 0.0;         // eval rollouts, fraction verified correct
  double entropy = 0.0;          // mean policy entropy over eval tokens, nats
  double mean_reward = 0.0;      // training batch sampled at this step
  double truncation_rate = 0.0;  // eval rollouts

  bool operator==(const DynamicsRecord&) const = default;
};

// Masking activity accumulated over every training group.
struct SelectionStats {
  std::size_t rollouts = 0;
  std::size_t maskable_rollouts = 0;  // floor(r * N) >= 1 (or floor(r * |y|) in token-level mode)
  std::size_t masked_rollouts = 0;    // received a non-empty mask
  std::size_t masked_tokens = 0;
  std::size_t tokens = 0;
};

struct TrainResult {
  std::vector<DynamicsRecord> records;
  ToyPolicy final_policy;
  ToyPolicy best_policy;  // highest AES against the step-0 evaluation
  std::size_t best_step = 0;
  double best_aes = 0.0;
  SelectionStats selection;
};

// Runs GRPO with the configured advantage selection. Records are taken at
// step 0, every eval_every steps and at total_steps (none when total_steps is
// 0). Throws NumericalError if the logits stop being finite.
TrainResult train(const TrainConfig& config);

// Same, starting from a caller-supplied policy (also used as the KL reference).
TrainResult train(const TrainConfig& config, const ToyPolicy& initial);

}  // namespace sas::sim
