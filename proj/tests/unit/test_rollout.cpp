#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "sas/rollout.hpp"

using namespace sas;

TEST_CASE("well-formed group of eight has no violations") {
  std::vector<Rollout> rs;
  for (int i = 0; i < 8; ++i) rs.push_back(fixtures::four_step("r" + std::to_string(i), i % 2));
  CHECK(validate_group(fixtures::group(rs)).empty());
}

TEST_CASE("half reward is reported against its rollout") {
  auto g = fixtures::with_rewards({1, 0, 0.5, 1});
  const auto v = validate_group(g);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rollout_id == "r2");
  CHECK(v[0].field == "reward");
}

TEST_CASE("single-rollout group is below minimum size") {
  const auto v = validate_group(fixtures::with_rewards({1}));
  REQUIRE(v.size() == 1);
  CHECK_FALSE(v[0].rollout_id.has_value());
  CHECK(v[0].message == "group size below minimum");
}

TEST_CASE("token-level violations") {
  auto g = fixtures::with_rewards({1, 0});
  g.rollouts[0].tokens[1].text.clear();
  g.rollouts[1].tokens[0].logprob = 0.25;
  g.rollouts[1].tokens[2].logprob = std::numeric_limits<double>::quiet_NaN();
  const auto v = validate_group(g);
  REQUIRE(v.size() == 3);
  CHECK(v[0].field == "tokens[1].text");
  CHECK(v[1].field == "tokens[0].logprob");
  CHECK(v[2].field == "tokens[2].logprob");

  auto empty = fixtures::with_rewards({1, 0});
  empty.rollouts[0].tokens.clear();
  CHECK(validate_group(empty).at(0).field == "tokens");

  auto foreign = fixtures::with_rewards({1, 0});
  foreign.rollouts[1].prompt_id = "other";
  CHECK(validate_group(foreign).at(0).field == "prompt_id");
}

TEST_CASE("validation is idempotent") {
  auto g = fixtures::with_rewards({1, 0.5, 2});
  g.rollouts[0].tokens[0].text.clear();
  const auto first = validate_group(g);
  CHECK(first == validate_group(g));
  CHECK(first.size() == 3);
}

TEST_CASE("rollout length counts tokens") {
  CHECK(rollout_length(fixtures::rollout("r", 1, {{"a", -1}, {"b", -1}, {"c", -1}})) == 3);
  Rollout long_one;
  long_one.truncated = true;
  long_one.tokens.assign(4096, Token{-1, "t", -0.1});
  CHECK(rollout_length(long_one) == 4096);
}

TEST_CASE("text joins token texts and reward sums stay in range") {
  const auto r = fixtures::four_step("r", 1);
  CHECK(r.text() == "A a\n\nB\n\nC c\n\nD");
  const auto g = fixtures::with_rewards({1, 0, 1, 1, 0});
  double sum = 0;
  for (double x : g.rewards()) sum += x;
  CHECK(sum == 3.0);
  CHECK(std::string(to_string(VerifierReason::kNoAnswerFound)) == "no-answer-found");
}
