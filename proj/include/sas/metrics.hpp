#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sas {

// Mean correctness over k sampled responses. Throws InputError on an empty
// list or values other than 0/1.
double pass_at_1(std::span<const int> correctness);

double mean_length(std::span<const std::size_t> lengths);

// Accuracy-Efficiency Score of a tuned model against its base model.
struct AesInputs {
  double acc_base = 0.0;
  double len_base = 0.0;
  double acc_model = 0.0;
  double len_model = 0.0;
  double alpha = 1.0;
  double beta = 3.0;
  double gamma = 5.0;
};

// ΔL = (Lb - Lm) / Lb, ΔAcc = (Am - Ab) / Ab;
// AES = α·ΔL + β·ΔAcc when ΔAcc >= 0, else α·ΔL - γ·|ΔAcc|.
// Throws InputError for non-positive inputs, or when one accuracy looks like
// a fraction (<= 1) and the other like a percentage (> 1).
double aes(const AesInputs& in);

// Non-fatal observations about the inputs (gamma <= beta).
std::vector<std::string> aes_warnings(const AesInputs& in);

struct RankedScores {
  std::vector<std::pair<std::string, double>> items;  // (item id, score)
};

// nDCG@k of the ranking induced by `confidence` (score descending, ties in
// input order), with gains read from `reference`. Negative reference scores
// are shifted so the minimum gain is 0. Returns 1 when the ideal DCG is 0.
// Throws InputError when the two sources disagree on the item set, an id
// repeats, or k == 0.
double ndcg_at_k(const RankedScores& confidence, const RankedScores& reference, std::size_t k);

// Mean Shannon entropy (nats) of the given categorical distributions. Throws
// InputError if a vector does not sum to 1 within 1e-9, has a negative entry,
// or the list is empty.
double mean_entropy(std::span<const std::vector<double>> distributions);

double entropy(std::span<const double> probabilities);

}  // namespace sas
