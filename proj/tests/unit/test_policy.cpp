#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "../oracle/gradient_check.hpp"
#include "sas/errors.hpp"
#include "sas/sim/policy.hpp"

using namespace sas::sim;

TEST_CASE("softmax rows are distributions") {
  ToyPolicy p(2, 4, 0.5);
  p.row(0)[2] = 3.0;
  p.row(1)[0] = -1000.0;
  for (std::size_t s = 0; s < 2; ++s) {
    const auto probs = p.probabilities(s);
    CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) == doctest::Approx(1.0));
    CHECK(std::exp(p.log_prob(s, 1)) == doctest::Approx(probs[1]));
  }
  CHECK(p.probabilities(0)[2] == doctest::Approx(std::exp(6.0) / (std::exp(6.0) + 3)));
  CHECK(ToyPolicy(1, 4).entropy(0) == doctest::Approx(std::log(4.0)));
  CHECK(p.first_non_finite() == p.logits().size());
  p.logits()[5] = std::numeric_limits<double>::infinity();
  CHECK(p.first_non_finite() == 5);
}

TEST_CASE("KL is zero against itself and positive otherwise") {
  ToyPolicy p(1, 3);
  CHECK(state_kl(p, p, 0) == 0.0);
  ToyPolicy q = p;
  q.row(0)[0] = 1.0;
  CHECK(state_kl(p, q, 0) > 0.0);
}

TEST_CASE("surrogate gradient matches central differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = oracle::check_surrogate_gradient(seed);
    CHECK(r.analytic_norm > 0.0);
    CHECK(r.relative_error < 1e-4);
  }
}

TEST_CASE("zero advantages at the reference give a zero gradient") {
  ToyPolicy p(2, 3);
  p.row(1)[2] = 0.4;
  std::vector<Decision> ds{{0, 1, p.log_prob(0, 1), 0.0}, {1, 2, p.log_prob(1, 2), 0.0}};
  for (double g : surrogate_gradient(p, p, ds, {})) CHECK(g == 0.0);
}

TEST_CASE("clipped decisions stop contributing") {
  ToyPolicy p(1, 3);
  // ratio exp(0.5) > 1.2 with a positive advantage: clipped branch is active.
  std::vector<Decision> ds{{0, 0, p.log_prob(0, 0) - 0.5, 1.0}};
  for (double g : surrogate_gradient(p, p, ds, {0.2, 0.0})) CHECK(g == 0.0);
  // Same ratio with a negative advantage stays on the unclipped branch.
  ds[0].advantage = -1.0;
  CHECK(surrogate_gradient(p, p, ds, {0.2, 0.0})[0] < 0.0);
}

TEST_CASE("shape mismatch is rejected") {
  ToyPolicy a(2, 3), b(3, 3);
  std::vector<Decision> ds;
  CHECK_THROWS_AS(surrogate_objective(a, b, ds, {}), sas::InputError);
}
