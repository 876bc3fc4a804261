#include "sas/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sas/errors.hpp"
#include "sas/random.hpp"

namespace sas {

namespace {

struct Keyed {
  double key;
  std::size_t index;
};

// Indices of the `count` smallest keys, ties by ascending index, returned in
// ascending index order.
std::vector<std::size_t> smallest(std::vector<Keyed> items, std::size_t count) {
  std::stable_sort(items.begin(), items.end(),
                   [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(items[i].index);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> largest(std::vector<Keyed> items, std::size_t count) {
  std::stable_sort(items.begin(), items.end(),
                   [](const Keyed& a, const Keyed& b) { return a.key > b.key; });
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(items[i].index);
  std::sort(out.begin(), out.end());
  return out;
}

void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InputError("ratio must be in (0,1)");
}

}  // namespace

const char* to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::kSas:
      return "sas";
    case SelectionMode::kSasCorrectOnly:
      return "sas-correct-only";
    case SelectionMode::kRandomSteps:
      return "random-steps";
    case SelectionMode::kTokenLevel:
      return "token-level";
    case SelectionMode::kGrpoPassthrough:
      return "grpo-passthrough";
  }
  return "unknown";
}

std::optional<SelectionMode> parse_selection_mode(std::string_view name) {
  for (auto mode : {SelectionMode::kSas, SelectionMode::kSasCorrectOnly,
                    SelectionMode::kRandomSteps, SelectionMode::kTokenLevel,
                    SelectionMode::kGrpoPassthrough}) {
    if (name == to_string(mode)) return mode;
  }
  return std::nullopt;
}

std::vector<StepConfidence> step_confidences(const Rollout& rollout,
                                             const StepPartition& partition) {
  std::vector<StepConfidence> out;
  out.reserve(partition.steps.size());
  for (const auto& step : partition.steps) {
    double sum = 0.0;
    for (auto t : step.token_indices) sum += rollout.tokens.at(t).logprob;
    out.push_back({step.index, sum / static_cast<double>(step.token_indices.size())});
  }
  return out;
}

std::size_t mask_count(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

RolloutMask select_mask(const Rollout& rollout, const StepPartition& partition,
                        std::span<const StepConfidence> confidences, bool correct,
                        const SelectionConfig& config) {
  check_ratio(config.ratio);
  if (confidences.size() != partition.steps.size()) {
    throw InputError("confidences for rollout '" + rollout.rollout_id +
                     "' do not match its step count");
  }
  RolloutMask mask;
  mask.correct = correct;

  if (config.mode == SelectionMode::kGrpoPassthrough) return mask;
  if (config.mode == SelectionMode::kSasCorrectOnly && !correct) return mask;

  if (config.mode == SelectionMode::kTokenLevel) {
    std::vector<Keyed> items;
    items.reserve(rollout.tokens.size());
    for (std::size_t t = 0; t < rollout.tokens.size(); ++t) {
      items.push_back({rollout.tokens[t].logprob, t});
    }
    const auto count = mask_count(config.ratio, items.size());
    mask.tokens = correct ? smallest(std::move(items), count) : largest(std::move(items), count);
    return mask;
  }

  const std::size_t n = partition.steps.size();
  const auto count = mask_count(config.ratio, n);
  std::vector<Keyed> items;
  items.reserve(n);
  if (config.mode == SelectionMode::kRandomSteps) {
    SplitMixRng rng(mix_seed(config.seed, fnv1a64(rollout.rollout_id)));
    for (std::size_t j = 0; j < n; ++j) {
      items.push_back({static_cast<double>(rng.next() >> 11), j});
    }
    mask.steps = smallest(std::move(items), count);
  } else {
    for (std::size_t j = 0; j < n; ++j) items.push_back({confidences[j].score, j});
    mask.steps = correct ? smallest(std::move(items), count) : largest(std::move(items), count);
  }

  for (auto& j : mask.steps) {
    const auto& step = partition.steps[j];
    mask.tokens.insert(mask.tokens.end(), step.token_indices.begin(), step.token_indices.end());
    j = step.index;
  }
  std::sort(mask.tokens.begin(), mask.tokens.end());
  return mask;
}

AdvantageTensor apply_selection(const AdvantageTensor& raw, const SelectionPlan& plan) {
  if (plan.per_rollout.size() != raw.per_rollout.size()) {
    throw InputError("selection plan covers " + std::to_string(plan.per_rollout.size()) +
                     " rollouts but the tensor has " + std::to_string(raw.per_rollout.size()));
  }
  if (plan.mode == SelectionMode::kGrpoPassthrough) return raw;

  AdvantageTensor out = raw;
  out.stage = AdvantageStage::kSelected;
  for (std::size_t i = 0; i < plan.per_rollout.size(); ++i) {
    auto& values = out.per_rollout[i];
    for (auto t : plan.per_rollout[i].tokens) {
      if (t >= values.size()) {
        throw InputError("mask token " + std::to_string(t) + " out of range for rollout " +
                         std::to_string(i));
      }
      values[t] = 0.0;
    }
  }
  return out;
}

ShapedGroup shape_group(const RolloutGroup& group, const SelectionConfig& config,
                        double epsilon) {
  check_ratio(config.ratio);
  ShapedGroup shaped;
  shaped.plan.mode = config.mode;
  shaped.plan.ratio = config.ratio;
  shaped.partitions.reserve(group.size());
  shaped.plan.per_rollout.reserve(group.size());
  for (const auto& rollout : group.rollouts) {
    auto partition = segment(rollout);
    const auto confidences = step_confidences(rollout, partition);
    shaped.plan.per_rollout.push_back(
        select_mask(rollout, partition, confidences, rollout.correct(), config));
    shaped.partitions.push_back(std::move(partition));
  }
  shaped.advantages = apply_selection(grpo_advantages(group, epsilon), shaped.plan);
  return shaped;
}

}  // namespace sas
