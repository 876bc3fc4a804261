#include "sas/sim/trainer.hpp"

#include <cmath>
#include <string>

#include "sas/errors.hpp"
#include "sas/metrics.hpp"
#include "sas/random.hpp"

namespace sas::sim {

namespace {

constexpr std::uint64_t kTrainStream = 0x7472616996E5ULL;
constexpr std::uint64_t kEvalStream = 0x6576616C5EEDULL;
constexpr std::uint64_t kSelectStream = 0x73656C6563ULL;

struct Evaluation {
  double mean_length = 0.0;
  double accuracy = 0.0;
  double entropy = 0.0;
  double truncation_rate = 0.0;
};

Evaluation evaluate(const ToyPolicy& policy, const TrainConfig& config,
                    const std::vector<ChainTask>& tasks, std::size_t step) {
  Evaluation ev;
  double tokens = 0.0;
  double entropy_sum = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto seed = mix_seed(mix_seed(config.seed ^ kEvalStream, step), i);
    const auto ep = sample_episode(policy, tasks[i], config.context_budget, seed, config.env);
    tokens += static_cast<double>(ep.rollout.tokens.size());
    for (auto s : ep.states) entropy_sum += policy.entropy(s);
    if (verify(ep.rollout, tasks[i]).correct) ev.accuracy += 1.0;
    if (ep.rollout.truncated) ev.truncation_rate += 1.0;
  }
  const double n = static_cast<double>(tasks.size());
  ev.mean_length = tokens / n;
  ev.accuracy /= n;
  ev.truncation_rate /= n;
  ev.entropy = tokens > 0.0 ? entropy_sum / tokens : 0.0;
  return ev;
}

void check_finite(const ToyPolicy& policy, std::size_t step) {
  const auto bad = policy.first_non_finite();
  if (bad < policy.logits().size()) {
    throw NumericalError("non-finite logit at step " + std::to_string(step) + " (state " +
                         std::to_string(bad / policy.symbols()) + ", slot " +
                         std::to_string(bad % policy.symbols()) + ")");
  }
}

}  // namespace

void validate_train_config(const TrainConfig& config) {
  validate_env(config.env);
  if (config.group_size < kMinGroupSize) throw InputError("group size must be >= 2");
  if (config.tasks_per_step == 0) throw InputError("tasks per step must be >= 1");
  if (!(config.ratio > 0.0 && config.ratio < 1.0)) throw InputError("ratio must be in (0,1)");
  if (!(config.clip_epsilon > 0.0 && config.clip_epsilon < 1.0)) {
    throw InputError("clip epsilon must be in (0,1)");
  }
  if (!(config.learn_rate > 0.0)) throw InputError("learn rate must be positive");
  if (!(config.kl_coeff >= 0.0)) throw InputError("kl coefficient must be >= 0");
  if (config.update_epochs == 0) throw InputError("update epochs must be >= 1");
  if (config.eval_every == 0) throw InputError("eval interval must be >= 1");
  if (config.eval_tasks == 0) throw InputError("eval task count must be >= 1");
  const auto min_len =
      minimum_episode_length(static_cast<std::size_t>(config.env.max_operands) - 1);
  if (config.context_budget < min_len) {
    throw InputError("context budget " + std::to_string(config.context_budget) +
                     " is below the minimum episode length " + std::to_string(min_len));
  }
}

TrainResult train(const TrainConfig& config) {
  validate_train_config(config);
  return train(config, make_base_policy(config.env));
}

TrainResult train(const TrainConfig& config, const ToyPolicy& initial) {
  validate_train_config(config);
  const ToyPolicy reference = initial;
  TrainResult result{{}, initial, initial, 0, 0.0, {}};
  ToyPolicy& policy = result.final_policy;

  std::vector<ChainTask> eval_tasks;
  for (std::size_t i = 0; i < config.eval_tasks; ++i) {
    eval_tasks.push_back(make_task(mix_seed(config.seed ^ kEvalStream, 0xE0A1 + i),
                                   config.env.min_operands, config.env.max_operands));
  }

  const SurrogateConfig surrogate{config.clip_epsilon, config.kl_coeff};
  std::optional<Evaluation> base_eval;

  auto record = [&](std::size_t step, double mean_reward) {
    const auto ev = evaluate(policy, config, eval_tasks, step);
    result.records.push_back(
        {step, ev.mean_length, ev.accuracy, ev.entropy, mean_reward, ev.truncation_rate});
    if (!base_eval) {
      base_eval = ev;
      return;
    }
    if (ev.accuracy > 0.0 && base_eval->accuracy > 0.0 && ev.mean_length > 0.0) {
      const double score = aes({base_eval->accuracy, base_eval->mean_length, ev.accuracy,
                                ev.mean_length, 1.0, 3.0, 5.0});
      if (score > result.best_aes) {
        result.best_aes = score;
        result.best_step = step;
        result.best_policy = policy;
      }
    }
  };

  for (std::size_t step = 0; step <= config.total_steps && config.total_steps > 0; ++step) {
    const auto step_seed = mix_seed(config.seed ^ kTrainStream, step);
    std::vector<Decision> decisions;
    double reward_sum = 0.0;
    std::size_t rollouts = 0;

    for (std::size_t b = 0; b < config.tasks_per_step; ++b) {
      const auto task_seed = mix_seed(step_seed, b);
      const auto task = make_task(task_seed, config.env.min_operands, config.env.max_operands);
      RolloutGroup group;
      group.prompt_id = "s" + std::to_string(step) + "/t" + std::to_string(b);
      group.prompt_text = task.prompt();
      std::vector<Episode> episodes;
      for (std::size_t g = 0; g < config.group_size; ++g) {
        auto ep = sample_episode(policy, task, config.context_budget, mix_seed(task_seed, g + 1),
                                 config.env);
        ep.rollout.prompt_id = group.prompt_id;
        ep.rollout.rollout_id = group.prompt_id + "/r" + std::to_string(g);
        ep.rollout.reward = config.forced_reward.value_or(verify(ep.rollout, task).correct ? 1.0
                                                                                           : 0.0);
        reward_sum += ep.rollout.reward;
        ++rollouts;
        group.rollouts.push_back(ep.rollout);
        episodes.push_back(std::move(ep));
      }
      const SelectionConfig selection{config.mode, config.ratio,
                                      mix_seed(config.seed ^ kSelectStream, step)};
      const auto shaped = shape_group(group, selection, config.std_epsilon);
      for (std::size_t g = 0; g < episodes.size(); ++g) {
        const auto& ep = episodes[g];
        const auto& mask = shaped.plan.per_rollout[g];
        const std::size_t units = config.mode == SelectionMode::kTokenLevel
                                      ? ep.rollout.tokens.size()
                                      : shaped.partitions[g].steps.size();
        auto& stats = result.selection;
        ++stats.rollouts;
        stats.tokens += ep.rollout.tokens.size();
        stats.masked_tokens += mask.tokens.size();
        if (mask_count(config.ratio, units) >= 1) ++stats.maskable_rollouts;
        if (!mask.tokens.empty()) ++stats.masked_rollouts;
        const auto& adv = shaped.advantages.per_rollout[g];
        for (std::size_t t = 0; t < ep.states.size(); ++t) {
          decisions.push_back({ep.states[t], ep.slots[t], ep.rollout.tokens[t].logprob, adv[t]});
        }
      }
    }

    const double mean_reward = reward_sum / static_cast<double>(rollouts);
    if (step % config.eval_every == 0 || step == config.total_steps) record(step, mean_reward);
    if (step == config.total_steps) break;

    for (std::size_t epoch = 0; epoch < config.update_epochs; ++epoch) {
      const auto grad = surrogate_gradient(policy, reference, decisions, surrogate);
      auto& logits = policy.logits();
      for (std::size_t i = 0; i < logits.size(); ++i) logits[i] += config.learn_rate * grad[i];
      check_finite(policy, step);
    }
  }
  return result;
}

}  // namespace sas::sim
