#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sas::sim {

// A chain of single-digit operands joined by + and -, evaluated left to right
// modulo 10 so every intermediate value and the answer are single digits.
struct ChainTask {
  std::uint64_t seed = 0;
  std::vector<int> operands;    // each in [0, 9], at least two
  std::vector<char> operators;  // '+' or '-', operands.size() - 1 entries
  int answer = 0;

  std::size_t operand_count() const { return operands.size(); }
  std::size_t derivation_steps() const { return operators.size(); }
  std::string prompt() const;  // e.g. "3+4-8"

  bool operator==(const ChainTask&) const = default;
};

int apply_op(int lhs, char op, int rhs);
int evaluate_chain(const std::vector<int>& operands, const std::vector<char>& operators);

// Deterministic task from a seed; operand count drawn uniformly from
// [min_operands, max_operands]. Throws InputError if min_operands < 2 or the
// range is empty.
ChainTask make_task(std::uint64_t seed, int min_operands, int max_operands);

// Throws InputError when the task's fields are inconsistent.
void validate_task(const ChainTask& task);

}  // namespace sas::sim
