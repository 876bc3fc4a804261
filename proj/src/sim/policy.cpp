#include "sas/sim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "sas/errors.hpp"

namespace sas::sim {

ToyPolicy::ToyPolicy(std::size_t states, std::size_t symbols, double temperature)
    : states_(states), symbols_(symbols), temperature_(temperature),
      logits_(states * symbols, 0.0) {
  if (states == 0 || symbols == 0) throw InputError("policy needs at least one state and symbol");
  if (!(temperature > 0.0)) throw InputError("temperature must be positive");
}

std::span<double> ToyPolicy::row(std::size_t state) {
  return {logits_.data() + state * symbols_, symbols_};
}

std::span<const double> ToyPolicy::row(std::size_t state) const {
  return {logits_.data() + state * symbols_, symbols_};
}

std::vector<double> ToyPolicy::log_probabilities(std::size_t state) const {
  const auto z = row(state);
  std::vector<double> out(symbols_);
  double max = -INFINITY;
  for (std::size_t j = 0; j < symbols_; ++j) {
    out[j] = z[j] / temperature_;
    max = std::max(max, out[j]);
  }
  double sum = 0.0;
  for (double v : out) sum += std::exp(v - max);
  const double log_norm = max + std::log(sum);
  for (double& v : out) v -= log_norm;
  return out;
}

std::vector<double> ToyPolicy::probabilities(std::size_t state) const {
  auto out = log_probabilities(state);
  for (double& v : out) v = std::exp(v);
  return out;
}

double ToyPolicy::log_prob(std::size_t state, std::size_t slot) const {
  return log_probabilities(state).at(slot);
}

double ToyPolicy::entropy(std::size_t state) const {
  const auto logp = log_probabilities(state);
  double h = 0.0;
  for (double lp : logp) h -= std::exp(lp) * lp;
  return h;
}

std::size_t ToyPolicy::first_non_finite() const {
  for (std::size_t i = 0; i < logits_.size(); ++i) {
    if (!std::isfinite(logits_[i])) return i;
  }
  return logits_.size();
}

double state_kl(const ToyPolicy& policy, const ToyPolicy& reference, std::size_t state) {
  const auto lp = policy.log_probabilities(state);
  const auto lq = reference.log_probabilities(state);
  double kl = 0.0;
  for (std::size_t j = 0; j < lp.size(); ++j) kl += std::exp(lp[j]) * (lp[j] - lq[j]);
  return kl;
}

namespace {

void check_shapes(const ToyPolicy& policy, const ToyPolicy& reference) {
  if (policy.states() != reference.states() || policy.symbols() != reference.symbols()) {
    throw InputError("policy and reference differ in shape");
  }
}

double clip(double ratio, double eps) { return std::clamp(ratio, 1.0 - eps, 1.0 + eps); }

}  // namespace

double surrogate_objective(const ToyPolicy& policy, const ToyPolicy& reference,
                           std::span<const Decision> decisions, const SurrogateConfig& config) {
  check_shapes(policy, reference);
  if (decisions.empty()) return 0.0;
  double total = 0.0;
  for (const auto& d : decisions) {
    const double ratio = std::exp(policy.log_prob(d.state, d.slot) - d.behavior_logprob);
    const double surrogate =
        std::min(ratio * d.advantage, clip(ratio, config.clip_epsilon) * d.advantage);
    total += surrogate - config.kl_coeff * state_kl(policy, reference, d.state);
  }
  return total / static_cast<double>(decisions.size());
}

std::vector<double> surrogate_gradient(const ToyPolicy& policy, const ToyPolicy& reference,
                                       std::span<const Decision> decisions,
                                       const SurrogateConfig& config) {
  check_shapes(policy, reference);
  const std::size_t v = policy.symbols();
  std::vector<double> grad(policy.logits().size(), 0.0);
  if (decisions.empty()) return grad;
  const double inv_n = 1.0 / static_cast<double>(decisions.size());
  const double inv_t = 1.0 / policy.temperature();

  // Per-state quantities are shared by every decision taken in that state.
  struct StateCache {
    std::vector<double> logp;
    std::vector<double> kl_grad;  // d KL / d logits
  };
  std::vector<std::optional<StateCache>> cache(policy.states());
  auto state_cache = [&](std::size_t s) -> const StateCache& {
    auto& entry = cache[s];
    if (!entry) {
      StateCache c;
      c.logp = policy.log_probabilities(s);
      c.kl_grad.assign(v, 0.0);
      if (config.kl_coeff != 0.0) {
        const auto lq = reference.log_probabilities(s);
        double kl = 0.0;
        for (std::size_t j = 0; j < v; ++j) kl += std::exp(c.logp[j]) * (c.logp[j] - lq[j]);
        for (std::size_t j = 0; j < v; ++j) {
          c.kl_grad[j] = inv_t * std::exp(c.logp[j]) * (c.logp[j] - lq[j] - kl);
        }
      }
      entry = std::move(c);
    }
    return *entry;
  };

  for (const auto& d : decisions) {
    const auto& c = state_cache(d.state);
    double* g = grad.data() + d.state * v;

    const double ratio = std::exp(c.logp[d.slot] - d.behavior_logprob);
    // The clipped branch is flat, so only the unclipped branch contributes.
    if (ratio * d.advantage <= clip(ratio, config.clip_epsilon) * d.advantage &&
        d.advantage != 0.0) {
      const double scale = inv_n * d.advantage * ratio * inv_t;
      for (std::size_t j = 0; j < v; ++j) {
        g[j] += scale * ((j == d.slot ? 1.0 : 0.0) - std::exp(c.logp[j]));
      }
    }
    if (config.kl_coeff != 0.0) {
      const double scale = inv_n * config.kl_coeff;
      for (std::size_t j = 0; j < v; ++j) g[j] -= scale * c.kl_grad[j];
    }
  }
  return grad;
}

}  // namespace sas::sim
