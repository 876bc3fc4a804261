#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sas/rollout.hpp"

namespace sas {

inline constexpr std::string_view kStepDelimiter = "\n\n";

struct ByteRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const { return end - begin; }
  bool operator==(const ByteRange&) const = default;
};

struct Step {
  std::size_t index = 0;  // 1-based ordinal within the rollout
  ByteRange bytes;
  std::vector<std::size_t> token_indices;  // 0-based token positions, ascending
  std::string text;                        // includes the trailing delimiter when present

  bool operator==(const Step&) const = default;
};

struct StepPartition {
  std::string rollout_id;
  std::vector<Step> steps;

  bool operator==(const StepPartition&) const = default;
};

// Splits text into maximal spans ending in "\n\n". Delimiters are consumed two
// bytes at a time, left to right, and each one closes the span before it. A
// trailing span without a delimiter is kept. Empty text yields no ranges.
std::vector<ByteRange> split_steps(std::string_view text);

// Segments a rollout into reasoning steps and maps tokens onto them. A token
// belongs to the step holding its first byte; a span that no token starts in
// is folded into the preceding step so every step owns at least one token.
// Throws InputError for a rollout without tokens.
StepPartition segment(const Rollout& rollout);

inline std::size_t step_count(const StepPartition& partition) { return partition.steps.size(); }

}  // namespace sas
