#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sas::sim {

// Tabular softmax policy: one row of logits per compact state, one column
// per vocabulary slot. Probabilities are softmax(logits / temperature).
class ToyPolicy {
 public:
  ToyPolicy(std::size_t states, std::size_t symbols, double temperature = 1.0);

  std::size_t states() const { return states_; }
  std::size_t symbols() const { return symbols_; }
  double temperature() const { return temperature_; }

  std::span<double> row(std::size_t state);
  std::span<const double> row(std::size_t state) const;
  std::vector<double>& logits() { return logits_; }
  const std::vector<double>& logits() const { return logits_; }

  std::vector<double> probabilities(std::size_t state) const;
  std::vector<double> log_probabilities(std::size_t state) const;
  double log_prob(std::size_t state, std::size_t slot) const;
  double entropy(std::size_t state) const;

  // Index of the first non-finite logit, or states()*symbols() if all are finite.
  std::size_t first_non_finite() const;

  bool operator==(const ToyPolicy&) const = default;

 private:
  std::size_t states_;
  std::size_t symbols_;
  double temperature_;
  std::vector<double> logits_;
};

// One sampled token as seen by the update rule.
struct Decision {
  std::size_t state = 0;
  std::size_t slot = 0;
  double behavior_logprob = 0.0;  // recorded at sampling time
  double advantage = 0.0;
};

struct SurrogateConfig {
  double clip_epsilon = 0.2;
  double kl_coeff = 1e-3;
};

// KL(p || q) between the two policies' distributions at one state.
double state_kl(const ToyPolicy& policy, const ToyPolicy& reference, std::size_t state);

// Token-mean of min(ρ·A, clip(ρ, 1-ε, 1+ε)·A) - kl_coeff·KL(π(·|s) || π_ref(·|s))
// over the decisions, with ρ = π(slot|s) / exp(behavior_logprob).
double surrogate_objective(const ToyPolicy& policy, const ToyPolicy& reference,
                           std::span<const Decision> decisions, const SurrogateConfig& config);

// Analytic gradient of surrogate_objective with respect to the logits,
// laid out like ToyPolicy::logits().
std::vector<double> surrogate_gradient(const ToyPolicy& policy, const ToyPolicy& reference,
                                       std::span<const Decision> decisions,
                                       const SurrogateConfig& config);

}  // namespace sas::sim
