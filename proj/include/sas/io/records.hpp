#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sas/advantage.hpp"
#include "sas/metrics.hpp"
#include "sas/rollout.hpp"
#include "sas/selection.hpp"
#include "sas/sim/chain_task.hpp"

namespace sas::io {

// One line of a rollout file:
// {"prompt_id":..., "rollout_id":..., "reward":1.0, "truncated":false,
//  "tokens":[{"text":..., "logprob":...}, ...]}
// Optional keys: "index" (order within the group), "prompt" (prompt text),
// "task" ({"seed", "operands", "operators", "answer"}) and "budget"
// (generation context budget); the last two are written by the simulator.
struct RolloutRecord {
  Rollout rollout;
  std::optional<long long> index;
  std::optional<std::string> prompt_text;
  std::optional<sim::ChainTask> task;
  std::optional<std::size_t> budget;
  std::size_t line = 0;  // 1-based source line, 0 when not read from a file

  // Compares content only; the source line is ignored.
  bool operator==(const RolloutRecord& other) const;
};

// Throws InputError describing the first problem found.
RolloutRecord parse_rollout_record(std::string_view line);
std::string serialize(const RolloutRecord& record);

// Reads every non-blank line. Errors are rethrown as "line N: ...".
std::vector<RolloutRecord> read_rollout_records(std::istream& in);
void write_rollout_records(std::ostream& out, const std::vector<RolloutRecord>& records);

// Collects records sharing a prompt_id into one group, groups ordered by first
// appearance and rollouts in file order. `members` receives, for each group,
// the positions of its records in `records`.
std::vector<RolloutGroup> group_records(const std::vector<RolloutRecord>& records,
                                        std::vector<std::vector<std::size_t>>* members = nullptr);

// One line of an advantage file.
struct AdvantageRecord {
  std::string prompt_id;
  std::string rollout_id;
  AdvantageStage stage = AdvantageStage::kRaw;
  std::vector<double> advantages;
  std::vector<std::size_t> masked_steps;
  std::optional<std::vector<std::size_t>> masked_tokens;  // token-level mode only

  bool operator==(const AdvantageRecord&) const = default;
};

AdvantageRecord parse_advantage_record(std::string_view line);
std::string serialize(const AdvantageRecord& record);

// Scored items for ranking comparisons, one {"item":..., "score":...} per line.
RankedScores read_ranked_scores(std::istream& in);

// Real numbers are written in the shortest form that parses back exactly.
std::string format_real(double value);

}  // namespace sas::io
