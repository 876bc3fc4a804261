#include <doctest.h>

#include <random>
#include <set>

#include "../oracle/reference_pipeline.hpp"
#include "fixtures.hpp"
#include "sas/errors.hpp"
#include "sas/segmentation.hpp"
#include "sas/sim/chain_task.hpp"
#include "sas/sim/environment.hpp"

using namespace sas;

namespace {

std::vector<std::string> texts(const StepPartition& p) {
  std::vector<std::string> out;
  for (const auto& s : p.steps) out.push_back(s.text);
  return out;
}

void check_partition(const Rollout& r, const StepPartition& p) {
  std::string joined;
  std::set<std::size_t> seen;
  std::size_t last = 0;
  bool first = true;
  for (std::size_t j = 0; j < p.steps.size(); ++j) {
    const auto& s = p.steps[j];
    CHECK(s.index == j + 1);
    CHECK_FALSE(s.token_indices.empty());
    CHECK(s.bytes.size() > 0);
    CHECK(s.text.size() == s.bytes.size());
    joined += s.text;
    for (auto t : s.token_indices) {
      CHECK((first || t > last));
      first = false;
      last = t;
      seen.insert(t);
    }
  }
  CHECK(joined == r.text());
  CHECK(seen.size() == r.tokens.size());
}

}  // namespace

TEST_CASE("three steps with trailing delimiters attached") {
  const auto r = fixtures::from_pieces({"A", "\n\n", "B", "\n\n", "C"});
  const auto p = segment(r);
  CHECK(texts(p) == std::vector<std::string>{"A\n\n", "B\n\n", "C"});
  CHECK(step_count(p) == 3);
  CHECK(p.steps[1].token_indices == std::vector<std::size_t>{2, 3});
  CHECK(p.steps[2].bytes == ByteRange{6, 7});
  check_partition(r, p);
}

TEST_CASE("no delimiter gives one step") {
  const auto r = fixtures::from_pieces({"single", " line", " answer"});
  const auto p = segment(r);
  REQUIRE(step_count(p) == 1);
  CHECK(p.steps[0].token_indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("consecutive delimiters leave a delimiter-only step") {
  const auto r = fixtures::from_pieces({"X", "\n\n", "\n\n", "Y"});
  const auto p = segment(r);
  CHECK(texts(p) == std::vector<std::string>{"X\n\n", "\n\n", "Y"});
  CHECK(texts(p) == oracle::split("X\n\n\n\nY"));
}

TEST_CASE("odd newline runs are consumed two at a time") {
  CHECK(split_steps("a\n\n\nb").size() == 2);
  const auto ranges = split_steps("\n\n\n");
  REQUIRE(ranges.size() == 2);
  CHECK(ranges[1] == ByteRange{2, 3});
  CHECK(split_steps("\n\nx").size() == 2);
  CHECK(split_steps("x\n\n").size() == 1);
}

TEST_CASE("straddling token belongs to the step of its first byte") {
  // "ab\n" + "\ncd": the delimiter is split across tokens, so "\ncd" starts
  // inside the first step even though most of it renders in the second.
  const auto r = fixtures::from_pieces({"ab\n", "\ncd", "\n\n", "e"});
  const auto p = segment(r);
  REQUIRE(step_count(p) == 3);
  CHECK(texts(p) == std::vector<std::string>{"ab\n\n", "cd\n\n", "e"});
  CHECK(p.steps[0].token_indices == std::vector<std::size_t>{0, 1});
  CHECK(p.steps[1].token_indices == std::vector<std::size_t>{2});
  check_partition(r, p);
}

TEST_CASE("a span no token starts in folds into the previous step") {
  // Spans are "a\n\n", "\n\n", "b"; the last one starts mid-token.
  const auto r = fixtures::from_pieces({"a\n\n\n", "\nb"});
  const auto p = segment(r);
  REQUIRE(step_count(p) == 2);
  CHECK(texts(p) == std::vector<std::string>{"a\n\n", "\n\nb"});
  CHECK(p.steps[1].token_indices == std::vector<std::size_t>{1});
  check_partition(r, p);
}

TEST_CASE("segment rejects rollouts it cannot partition") {
  Rollout empty;
  CHECK_THROWS_AS(segment(empty), InputError);
  CHECK_THROWS_AS(segment(fixtures::from_pieces({"", ""})), InputError);
}

TEST_CASE("simulator traces: step counts and contiguous token ranges") {
  sim::EnvConfig env;
  env.max_operands = 5;
  const auto policy = sim::make_base_policy(env);
  bool saw_twelve = false;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto task = sim::make_task(seed, env.min_operands, env.max_operands);
    const auto r = sim::generate_rollout(policy, task, 64, seed, env);
    const auto p = segment(r);
    check_partition(r, p);
    CHECK(step_count(p) == oracle::split(r.text()).size());
    for (const auto& s : p.steps) {
      CHECK(s.token_indices.back() - s.token_indices.front() + 1 == s.token_indices.size());
    }
    saw_twelve = saw_twelve || step_count(p) == 12;
  }
  CHECK(saw_twelve);
}

TEST_CASE("fuzzed strings round-trip and match the byte scanner") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> alphabet{"\n", "\n\n", "a", "bc", " ", "\n\n\n"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> pieces;
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) pieces.push_back(alphabet[rng() % alphabet.size()]);
    const auto r = fixtures::from_pieces(pieces);
    const auto p = segment(r);
    check_partition(r, p);
    CHECK(p == segment(r));
    const auto ref = oracle::steps_of(r);
    REQUIRE(ref.size() == p.steps.size());
    for (std::size_t j = 0; j < ref.size(); ++j) {
      CHECK(ref[j].text == p.steps[j].text);
      CHECK(ref[j].tokens == p.steps[j].token_indices);
    }
  }
}
