#include "sas/rollout.hpp"

#include <cmath>

namespace sas {

std::string Rollout::text() const {
  std::string out;
  for (const auto& t : tokens) out += t.text;
  return out;
}

std::vector<double> RolloutGroup::rewards() const {
  std::vector<double> out;
  out.reserve(rollouts.size());
  for (const auto& r : rollouts) out.push_back(r.reward);
  return out;
}

const char* to_string(VerifierReason reason) {
  switch (reason) {
    case VerifierReason::kAnswerMatch:
      return "answer-match";
    case VerifierReason::kAnswerMismatch:
      return "answer-mismatch";
    case VerifierReason::kNoAnswerFound:
      return "no-answer-found";
  }
  return "unknown";
}

std::vector<Violation> validate_group(const RolloutGroup& group) {
  std::vector<Violation> out;
  if (group.rollouts.size() < kMinGroupSize) {
    out.push_back({std::nullopt, "rollouts", "group size below minimum"});
  }
  for (const auto& r : group.rollouts) {
    auto add = [&](std::string field, std::string message) {
      out.push_back({r.rollout_id, std::move(field), std::move(message)});
    };
    if (r.prompt_id != group.prompt_id) {
      add("prompt_id", "rollout prompt_id '" + r.prompt_id + "' differs from group '" +
                           group.prompt_id + "'");
    }
    if (r.reward != 0.0 && r.reward != 1.0) add("reward", "reward must be 0 or 1");
    if (r.tokens.empty()) add("tokens", "rollout has no tokens");
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
      const auto& t = r.tokens[i];
      const std::string where = "tokens[" + std::to_string(i) + "]";
      if (t.text.empty()) add(where + ".text", "token text is empty");
      if (!std::isfinite(t.logprob) || t.logprob > 0.0) {
        add(where + ".logprob", "logprob must be finite and <= 0");
      }
    }
  }
  return out;
}

}  // namespace sas
