#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sas/advantage.hpp"
#include "sas/rollout.hpp"
#include "sas/segmentation.hpp"

namespace sas {

enum class SelectionMode {
  kSas,              // low-confidence steps of correct rollouts, high-confidence steps of failed ones
  kSasCorrectOnly,   // as kSas, but failed rollouts are left untouched
  kRandomSteps,      // uniformly drawn steps, confidence ignored
  kTokenLevel,       // individual tokens ranked by log-probability
  kGrpoPassthrough,  // no masking
};

const char* to_string(SelectionMode mode);
std::optional<SelectionMode> parse_selection_mode(std::string_view name);

inline constexpr double kDefaultSelectionRatio = 0.3;

struct SelectionConfig {
  SelectionMode mode = SelectionMode::kSas;
  double ratio = kDefaultSelectionRatio;  // in (0, 1)
  std::uint64_t seed = 0;                 // only read by kRandomSteps
};

struct StepConfidence {
  std::size_t step_index = 0;  // 1-based, matches Step::index
  double score = 0.0;          // mean token log-probability over the step

  bool operator==(const StepConfidence&) const = default;
};

std::vector<StepConfidence> step_confidences(const Rollout& rollout,
                                             const StepPartition& partition);

// floor(ratio * n), tolerant of binary rounding just below an integer
// (0.29 * 100 must give 29, not 28).
std::size_t mask_count(double ratio, std::size_t n);

struct RolloutMask {
  std::vector<std::size_t> steps;   // 1-based step ordinals; empty in token-level mode
  std::vector<std::size_t> tokens;  // 0-based token positions covered by the mask
  bool correct = false;

  bool operator==(const RolloutMask&) const = default;
};

struct SelectionPlan {
  SelectionMode mode = SelectionMode::kSas;
  double ratio = kDefaultSelectionRatio;
  std::vector<RolloutMask> per_rollout;
};

// Chooses what to zero in one rollout. Ties are broken by ascending index.
// Throws InputError when the ratio is outside (0, 1) or the confidences do
// not line up with the partition.
RolloutMask select_mask(const Rollout& rollout, const StepPartition& partition,
                        std::span<const StepConfidence> confidences, bool correct,
                        const SelectionConfig& config);

// Zeroes masked positions; every other entry is copied unchanged. Throws
// InputError if the plan and tensor disagree in shape.
AdvantageTensor apply_selection(const AdvantageTensor& raw, const SelectionPlan& plan);

struct ShapedGroup {
  std::vector<StepPartition> partitions;
  SelectionPlan plan;
  AdvantageTensor advantages;  // kSelected, or kRaw under kGrpoPassthrough
};

// segment -> confidences -> select -> apply for a whole group. Correctness of
// each rollout is read from its reward.
ShapedGroup shape_group(const RolloutGroup& group, const SelectionConfig& config,
                        double epsilon = kDefaultStdEpsilon);

}  // namespace sas
