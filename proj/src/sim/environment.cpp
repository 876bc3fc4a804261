#include "sas/sim/environment.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sas/errors.hpp"
#include "sas/random.hpp"

namespace sas::sim {

namespace vocab {

namespace {
constexpr std::array<std::string_view, 50> kTexts = {
    "0",       "1",        "2",          "3",       "4",       "5",       "6",
    "7",       "8",        "9",          "+",       "-",       "=",       "\n\n",
    "ANSWER: ", " wait",   " hmm",       " check",  " again",  " so",     " let",
    " me",     " verify",  " that",      " is",     " right",  " ok",     " yes",
    " maybe",  " actually", " recompute", " carefully", " step", " result", " sum",
    " value",  " we",      " get",       " then",   " but",    " also",   " note",
    " indeed", " thus",    " hence",     " double", " confirm", " sure",  " fine",
    " good"};
}  // namespace

std::size_t size() { return kTexts.size(); }

std::string_view text(std::size_t symbol) { return kTexts.at(symbol); }

std::optional<std::size_t> lookup(std::string_view t) {
  for (std::size_t i = 0; i < kTexts.size(); ++i) {
    if (kTexts[i] == t) return i;
  }
  return std::nullopt;
}

}  // namespace vocab

void validate_env(const EnvConfig& config) {
  if (config.min_operands < 2 || config.max_operands < config.min_operands) {
    throw InputError("operand range must satisfy 2 <= min <= max");
  }
  if (config.max_operands > 10) throw InputError("at most 10 operands are supported");
  if (!(config.temperature > 0.0)) throw InputError("temperature must be positive");
}

std::size_t state_count(const EnvConfig& config) {
  return static_cast<std::size_t>(config.max_operands) * kPhaseCount;
}

std::size_t state_index(std::size_t remaining, Phase phase) {
  return remaining * kPhaseCount + static_cast<std::size_t>(phase);
}

std::size_t minimum_episode_length(std::size_t derivation_steps) {
  return 5 * derivation_steps + 1;
}

namespace {

// Fills a logit row from (symbol set, total mass) pairs; leftover mass is
// spread over the symbols no pair mentions.
struct Mass {
  std::vector<std::size_t> symbols;
  double total;
};

void fill_row(std::span<double> row, const std::vector<Mass>& masses) {
  const std::size_t v = row.size();
  std::vector<double> p(v, -1.0);
  double assigned = 0.0;
  for (const auto& m : masses) {
    for (auto s : m.symbols) p[s] = m.total / static_cast<double>(m.symbols.size());
    assigned += m.total;
  }
  std::size_t rest = 0;
  for (double x : p) rest += x < 0.0 ? 1 : 0;
  const double leftover = rest > 0 ? (1.0 - assigned) / static_cast<double>(rest) : 0.0;
  if (!(leftover > 0.0) && rest > 0) throw InputError("base profile masses exceed 1");
  for (std::size_t j = 0; j < v; ++j) {
    row[j] = std::log(p[j] < 0.0 ? leftover : p[j]);
  }
}

std::vector<std::size_t> fillers() {
  std::vector<std::size_t> out;
  for (std::size_t s = vocab::kFirstFiller; s < vocab::size(); ++s) out.push_back(s);
  return out;
}

std::size_t sample_slot(const std::vector<double>& probs, SplitMixRng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    cum += probs[j];
    if (u < cum) return j;
  }
  // Rounding left u above the final cumulative sum; take the last nonzero slot.
  for (std::size_t j = probs.size(); j-- > 0;) {
    if (probs[j] > 0.0) return j;
  }
  return probs.size() - 1;
}

// Slot -> emitted symbol for the relative-digit and relative-operator rows.
std::size_t emit_digit(std::size_t slot, int truth) {
  if (!vocab::is_digit(slot)) return slot;
  return static_cast<std::size_t>((static_cast<int>(slot) + truth) % 10);
}

std::size_t emit_operator(std::size_t slot, char truth) {
  if (!vocab::is_operator(slot) || truth == '+') return slot;
  return slot == vocab::kPlus ? vocab::kMinus : vocab::kPlus;
}

}  // namespace

ToyPolicy make_base_policy(const EnvConfig& config) {
  validate_env(config);
  const auto& b = config.base;
  ToyPolicy policy(state_count(config), vocab::size(), config.temperature);
  const auto fill = fillers();
  for (std::size_t rem = 0; rem < static_cast<std::size_t>(config.max_operands); ++rem) {
    if (rem > 0) {
      fill_row(policy.row(state_index(rem, Phase::kStepStart)),
               {{{vocab::kPlus}, b.derive}, {fill, b.reflect}, {{vocab::kAnswer}, b.answer_early}});
    } else {
      fill_row(policy.row(state_index(rem, Phase::kStepStart)),
               {{{vocab::kAnswer}, b.answer_done},
                {fill, b.reflect_done},
                {{vocab::kPlus}, b.recheck}});
    }
    fill_row(policy.row(state_index(rem, Phase::kOperand)), {{{0}, b.copy_correct}});
    fill_row(policy.row(state_index(rem, Phase::kEquals)), {{{vocab::kEquals}, b.copy_correct}});
    fill_row(policy.row(state_index(rem, Phase::kResult)), {{{0}, b.result_correct}});
    fill_row(policy.row(state_index(rem, Phase::kStepEnd)),
             {{{vocab::kDelimiter}, b.step_end}, {fill, b.ramble}});
    fill_row(policy.row(state_index(rem, Phase::kReflect)),
             {{{vocab::kDelimiter}, b.reflect_stop}, {fill, b.reflect_continue}});
    fill_row(policy.row(state_index(rem, Phase::kAnswerDigit)), {{{0}, b.answer_correct}});
  }
  return policy;
}

Episode sample_episode(const ToyPolicy& policy, const ChainTask& task, std::size_t context_budget,
                       std::uint64_t seed, const EnvConfig& config) {
  validate_task(task);
  const std::size_t steps = task.derivation_steps();
  if (steps + 1 > static_cast<std::size_t>(config.max_operands)) {
    throw InputError("task has more operands than the environment supports");
  }
  if (policy.states() != state_count(config) || policy.symbols() != vocab::size()) {
    throw InputError("policy shape does not match the environment");
  }

  SplitMixRng rng(seed);
  Episode ep;
  ep.rollout.prompt_id = task.prompt();

  std::size_t done = 0;      // derivation steps completed
  int value = task.operands[0];
  bool recheck = false;      // current derivation repeats the last step
  Phase phase = Phase::kStepStart;

  while (ep.rollout.tokens.size() < context_budget) {
    const std::size_t remaining = steps - done;
    const std::size_t state = state_index(remaining, phase);
    const std::size_t op_step = remaining > 0 ? done : steps - 1;
    const auto probs = policy.probabilities(state);
    const std::size_t slot = sample_slot(probs, rng);

    std::size_t symbol = slot;
    switch (phase) {
      case Phase::kStepStart:
        symbol = emit_operator(slot, task.operators[op_step]);
        break;
      case Phase::kOperand:
        symbol = emit_digit(slot, task.operands[op_step + 1]);
        break;
      case Phase::kResult:
        symbol = emit_digit(slot, recheck ? value
                                          : apply_op(value, task.operators[op_step],
                                                     task.operands[op_step + 1]));
        break;
      case Phase::kAnswerDigit:
        symbol = emit_digit(slot, value);
        break;
      default:
        break;
    }

    ep.states.push_back(state);
    ep.slots.push_back(slot);
    ep.rollout.tokens.push_back(
        {static_cast<int>(symbol), std::string(vocab::text(symbol)), std::log(probs[slot])});

    if (phase == Phase::kAnswerDigit) {
      ep.answered = true;
      break;
    }
    if (symbol == vocab::kDelimiter) {
      phase = Phase::kStepStart;
      continue;
    }
    if (symbol == vocab::kAnswer) {
      phase = Phase::kAnswerDigit;
      continue;
    }
    switch (phase) {
      case Phase::kStepStart:
        if (vocab::is_filler(symbol)) {
          phase = Phase::kReflect;
        } else {
          recheck = remaining == 0;
          phase = Phase::kOperand;
        }
        break;
      case Phase::kOperand:
        phase = Phase::kEquals;
        break;
      case Phase::kEquals:
        phase = Phase::kResult;
        break;
      case Phase::kResult:
        if (!recheck) {
          if (vocab::is_digit(symbol)) value = static_cast<int>(symbol);
          ++done;
        }
        phase = Phase::kStepEnd;
        break;
      default:
        break;
    }
  }
  ep.rollout.truncated = !ep.answered;
  return ep;
}

Rollout generate_rollout(const ToyPolicy& policy, const ChainTask& task,
                         std::size_t context_budget, std::uint64_t seed,
                         const EnvConfig& config) {
  return sample_episode(policy, task, context_budget, seed, config).rollout;
}

VerifierOutcome verify(const Rollout& rollout, const ChainTask& task) {
  const auto& tokens = rollout.tokens;
  std::size_t marker = tokens.size();
  for (std::size_t i = tokens.size(); i-- > 0;) {
    if (tokens[i].text == vocab::text(vocab::kAnswer)) {
      marker = i;
      break;
    }
  }
  if (marker + 1 >= tokens.size()) return {false, VerifierReason::kNoAnswerFound};
  if (tokens[marker + 1].text == std::to_string(task.answer)) {
    return {true, VerifierReason::kAnswerMatch};
  }
  return {false, VerifierReason::kAnswerMismatch};
}

}  // namespace sas::sim
