#include "sas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "sas/errors.hpp"

namespace sas {

double pass_at_1(std::span<const int> correctness) {
  if (correctness.empty()) throw InputError("pass@1 needs at least one response");
  double sum = 0.0;
  for (int c : correctness) {
    if (c != 0 && c != 1) throw InputError("correctness values must be 0 or 1");
    sum += c;
  }
  return sum / static_cast<double>(correctness.size());
}

double mean_length(std::span<const std::size_t> lengths) {
  if (lengths.empty()) return 0.0;
  double sum = 0.0;
  for (auto l : lengths) sum += static_cast<double>(l);
  return sum / static_cast<double>(lengths.size());
}

double aes(const AesInputs& in) {
  for (double v : {in.acc_base, in.len_base, in.acc_model, in.len_model, in.alpha, in.beta,
                   in.gamma}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("AES inputs must be positive");
  }
  if ((in.acc_base <= 1.0) != (in.acc_model <= 1.0)) {
    throw InputError("accuracies must use the same scale (both fractions or both percentages)");
  }
  const double d_len = (in.len_base - in.len_model) / in.len_base;
  const double d_acc = (in.acc_model - in.acc_base) / in.acc_base;
  if (d_acc >= 0.0) return in.alpha * d_len + in.beta * d_acc;
  return in.alpha * d_len - in.gamma * std::abs(d_acc);
}

std::vector<std::string> aes_warnings(const AesInputs& in) {
  std::vector<std::string> out;
  if (!(in.gamma > in.beta)) {
    out.emplace_back("gamma <= beta: accuracy loss is not penalized more than accuracy gain");
  }
  return out;
}

double ndcg_at_k(const RankedScores& confidence, const RankedScores& reference, std::size_t k) {
  if (k == 0) throw InputError("k must be >= 1");
  std::unordered_map<std::string, double> gains;
  for (const auto& [id, score] : reference.items) {
    if (!gains.emplace(id, score).second) throw InputError("duplicate reference item '" + id + "'");
  }
  if (confidence.items.size() != gains.size()) {
    throw InputError("confidence and reference rankings cover different items");
  }
  std::unordered_map<std::string, bool> seen;
  for (const auto& [id, score] : confidence.items) {
    if (!gains.contains(id)) throw InputError("item '" + id + "' missing from reference");
    if (!seen.emplace(id, true).second) throw InputError("duplicate confidence item '" + id + "'");
  }
  if (gains.empty()) throw InputError("rankings are empty");

  double min_gain = 0.0;
  for (const auto& [id, g] : gains) min_gain = std::min(min_gain, g);
  if (min_gain < 0.0) {
    for (auto& [id, g] : gains) g -= min_gain;
  }

  std::vector<std::size_t> order(confidence.items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return confidence.items[a].second > confidence.items[b].second;
  });
  std::vector<double> ideal;
  ideal.reserve(gains.size());
  for (const auto& [id, g] : gains) ideal.push_back(g);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());

  const std::size_t depth = std::min(k, order.size());
  double dcg = 0.0;
  double idcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    const double discount = std::log2(static_cast<double>(i) + 2.0);
    dcg += gains.at(confidence.items[order[i]].first) / discount;
    idcg += ideal[i] / discount;
  }
  if (idcg == 0.0) return 1.0;
  return dcg / idcg;
}

double entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double mean_entropy(std::span<const std::vector<double>> distributions) {
  if (distributions.empty()) throw InputError("no distributions given");
  double total = 0.0;
  for (const auto& dist : distributions) {
    double sum = 0.0;
    for (double p : dist) {
      if (!(p >= 0.0)) throw InputError("probabilities must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("distribution does not sum to 1");
    total += entropy(dist);
  }
  return total / static_cast<double>(distributions.size());
}

}  // namespace sas
