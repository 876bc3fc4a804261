#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sas {

struct Token {
  int id = -1;  // vocabulary index; -1 when the producer did not supply one
  std::string text;
  double logprob = 0.0;  // natural-log probability under the sampling policy

  bool operator==(const Token&) const = default;
};

struct Rollout {
  std::string prompt_id;
  std::string rollout_id;
  std::vector<Token> tokens;
  bool truncated = false;  // stopped by the context budget, recorded at generation time
  double reward = 0.0;     // outcome reward, 0 or 1

  // Byte-wise concatenation of the token texts.
  std::string text() const;
  bool correct() const { return reward == 1.0; }

  bool operator==(const Rollout&) const = default;
};

struct RolloutGroup {
  std::string prompt_id;
  std::string prompt_text;
  std::vector<Rollout> rollouts;

  std::size_t size() const { return rollouts.size(); }
  std::vector<double> rewards() const;

  bool operator==(const RolloutGroup&) const = default;
};

enum class VerifierReason { kAnswerMatch, kAnswerMismatch, kNoAnswerFound };

struct VerifierOutcome {
  bool correct = false;
  VerifierReason reason = VerifierReason::kNoAnswerFound;

  bool operator==(const VerifierOutcome&) const = default;
};

const char* to_string(VerifierReason reason);

inline constexpr std::size_t kMinGroupSize = 2;

struct Violation {
  std::optional<std::string> rollout_id;  // empty for group-level violations
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Checks every structural invariant of the group. Violations are returned as
// data; an empty result means the group is well formed.
std::vector<Violation> validate_group(const RolloutGroup& group);

inline std::size_t rollout_length(const Rollout& rollout) { return rollout.tokens.size(); }

}  // namespace sas
