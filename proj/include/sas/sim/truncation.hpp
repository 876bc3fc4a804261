#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sas/rollout.hpp"
#include "sas/sim/chain_task.hpp"
#include "sas/sim/environment.hpp"

namespace sas::sim {

struct CorpusEntry {
  Rollout rollout;
  ChainTask task;
  std::size_t budget = 0;  // context budget the rollout was generated under
};

// `count` rollouts from `policy`, one task each, generated at `budget` and
// verified. Fully determined by the seed.
std::vector<CorpusEntry> sample_corpus(const ToyPolicy& policy, std::size_t count,
                                       std::size_t budget, std::uint64_t seed,
                                       const EnvConfig& config);

struct FlipReport {
  std::size_t short_budget = 0;
  std::size_t originally_correct = 0;
  std::size_t flipped = 0;
  std::size_t lost_answer_only = 0;      // cut fell inside the final step
  std::size_t lost_derivation_tail = 0;  // cut removed earlier steps too
  double flip_rate = 0.0;                // flipped / originally_correct, 0 if none correct
};

// Cuts every originally correct rollout to short_budget tokens and verifies it
// again. Throws InputError when short_budget is not below the largest
// generation budget in the corpus.
FlipReport truncation_study(std::span<const CorpusEntry> corpus, std::size_t short_budget);

}  // namespace sas::sim
