#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sas/rollout.hpp"
#include "sas/sim/chain_task.hpp"
#include "sas/sim/policy.hpp"

namespace sas::sim {

// Vocabulary: ten digits, two operators, '=', the step delimiter, the answer
// marker, and filler words used by reflection and rambling.
namespace vocab {
inline constexpr std::size_t kPlus = 10;
inline constexpr std::size_t kMinus = 11;
inline constexpr std::size_t kEquals = 12;
inline constexpr std::size_t kDelimiter = 13;
inline constexpr std::size_t kAnswer = 14;
inline constexpr std::size_t kFirstFiller = 15;

std::size_t size();
std::string_view text(std::size_t symbol);
std::optional<std::size_t> lookup(std::string_view text);
inline bool is_digit(std::size_t s) { return s < 10; }
inline bool is_operator(std::size_t s) { return s == kPlus || s == kMinus; }
inline bool is_filler(std::size_t s) { return s >= kFirstFiller; }
}  // namespace vocab

// Where the generator is inside the current step. Together with the number of
// derivation steps still outstanding this forms the policy state.
enum class Phase : std::size_t {
  kStepStart,  // first token of a step picks its kind
  kOperand,
  kEquals,
  kResult,
  kStepEnd,  // expects the delimiter; anything else rambles on
  kReflect,  // filler until the delimiter
  kAnswerDigit,
};
inline constexpr std::size_t kPhaseCount = 7;

// Probability profile of the initial ("pretrained", verbose) policy. Each
// named mass is spread evenly over its symbols; whatever is left over goes
// uniformly to every other symbol.
struct BaseProfile {
  double derive = 0.62;          // correct operator at a step start with work left
  double reflect = 0.30;         // filler at a step start (total over fillers)
  double answer_early = 0.03;    // answer marker with work left
  double answer_done = 0.55;     // answer marker once the chain is derived
  double recheck = 0.10;         // redundant derivation once the chain is derived
  double reflect_done = 0.30;    // filler once the chain is derived
  double copy_correct = 0.95;    // operand and '=' positions
  double result_correct = 0.90;  // result digit
  double step_end = 0.85;        // delimiter after a result
  double ramble = 0.13;          // filler after a result (total over fillers)
  double reflect_stop = 0.25;    // delimiter inside a reflection
  double reflect_continue = 0.70;
  double answer_correct = 0.93;  // answer digit
};

struct EnvConfig {
  int min_operands = 2;
  int max_operands = 5;
  double temperature = 1.0;
  BaseProfile base;
};

// Throws InputError on out-of-range settings.
void validate_env(const EnvConfig& config);

std::size_t state_count(const EnvConfig& config);
std::size_t state_index(std::size_t remaining, Phase phase);

// Initial policy built from config.base. The result is a valid policy for the
// environment described by config.
ToyPolicy make_base_policy(const EnvConfig& config);

// Rollout plus the per-token (state, slot) pairs the update rule needs.
// Digit and operator slots are scored relative to the value the task expects
// at that position, so one logit row serves every task.
struct Episode {
  Rollout rollout;
  std::vector<std::size_t> states;
  std::vector<std::size_t> slots;
  bool answered = false;
};

// Samples one episode. Stops after the answer digit or after context_budget
// tokens (truncated = true). rollout.reward is left at 0; callers verify.
Episode sample_episode(const ToyPolicy& policy, const ChainTask& task, std::size_t context_budget,
                       std::uint64_t seed, const EnvConfig& config);

Rollout generate_rollout(const ToyPolicy& policy, const ChainTask& task,
                         std::size_t context_budget, std::uint64_t seed,
                         const EnvConfig& config);

// Rule-based check: finds the last answer marker and compares the token after
// it with the task's answer.
VerifierOutcome verify(const Rollout& rollout, const ChainTask& task);

// Shortest correct trace, in tokens: five per derivation step (the last
// delimiter may be skipped) plus the answer marker and digit.
std::size_t minimum_episode_length(std::size_t derivation_steps);

}  // namespace sas::sim
