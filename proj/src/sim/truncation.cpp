#include "sas/sim/truncation.hpp"

#include <algorithm>
#include <string>

#include "sas/errors.hpp"
#include "sas/random.hpp"
#include "sas/segmentation.hpp"

namespace sas::sim {

std::vector<CorpusEntry> sample_corpus(const ToyPolicy& policy, std::size_t count,
                                       std::size_t budget, std::uint64_t seed,
                                       const EnvConfig& config) {
  std::vector<CorpusEntry> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto task_seed = mix_seed(seed, i);
    auto task = make_task(task_seed, config.min_operands, config.max_operands);
    auto rollout = generate_rollout(policy, task, budget, mix_seed(task_seed, 1), config);
    rollout.prompt_id = "c" + std::to_string(i);
    rollout.rollout_id = rollout.prompt_id + "/r0";
    rollout.reward = verify(rollout, task).correct ? 1.0 : 0.0;
    corpus.push_back({std::move(rollout), std::move(task), budget});
  }
  return corpus;
}

FlipReport truncation_study(std::span<const CorpusEntry> corpus, std::size_t short_budget) {
  std::size_t long_budget = 0;
  for (const auto& e : corpus) long_budget = std::max(long_budget, e.budget);
  if (short_budget >= long_budget) {
    throw InputError("budget " + std::to_string(short_budget) +
                     " must be below the generation budget " + std::to_string(long_budget));
  }

  FlipReport report;
  report.short_budget = short_budget;
  for (const auto& e : corpus) {
    if (!verify(e.rollout, e.task).correct) continue;
    ++report.originally_correct;
    if (e.rollout.tokens.size() <= short_budget) continue;

    Rollout cut = e.rollout;
    cut.tokens.resize(short_budget);
    cut.truncated = true;
    if (verify(cut, e.task).correct) continue;
    ++report.flipped;

    const auto partition = segment(e.rollout);
    const std::size_t final_step_start = partition.steps.back().token_indices.front();
    if (short_budget >= final_step_start) {
      ++report.lost_answer_only;
    } else {
      ++report.lost_derivation_tail;
    }
  }
  if (report.originally_correct > 0) {
    report.flip_rate = static_cast<double>(report.flipped) /
                       static_cast<double>(report.originally_correct);
  }
  return report;
}

}  // namespace sas::sim
