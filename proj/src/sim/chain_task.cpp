#include "sas/sim/chain_task.hpp"

#include "sas/errors.hpp"
#include "sas/random.hpp"

namespace sas::sim {

std::string ChainTask::prompt() const {
  std::string out;
  for (std::size_t i = 0; i < operands.size(); ++i) {
    if (i > 0) out += operators[i - 1];
    out += static_cast<char>('0' + operands[i]);
  }
  return out;
}

int apply_op(int lhs, char op, int rhs) {
  const int v = op == '+' ? lhs + rhs : lhs - rhs;
  return ((v % 10) + 10) % 10;
}

int evaluate_chain(const std::vector<int>& operands, const std::vector<char>& operators) {
  int value = operands.at(0);
  for (std::size_t i = 0; i < operators.size(); ++i) {
    value = apply_op(value, operators[i], operands.at(i + 1));
  }
  return value;
}

ChainTask make_task(std::uint64_t seed, int min_operands, int max_operands) {
  if (min_operands < 2 || max_operands < min_operands) {
    throw InputError("operand range must satisfy 2 <= min <= max");
  }
  SplitMixRng rng(seed);
  ChainTask task;
  task.seed = seed;
  const int count = rng.uniform_int(min_operands, max_operands);
  for (int i = 0; i < count; ++i) {
    task.operands.push_back(rng.uniform_int(0, 9));
    if (i > 0) task.operators.push_back(rng.uniform_int(0, 1) == 0 ? '+' : '-');
  }
  task.answer = evaluate_chain(task.operands, task.operators);
  return task;
}

void validate_task(const ChainTask& task) {
  if (task.operands.size() < 2) throw InputError("task needs at least two operands");
  if (task.operators.size() + 1 != task.operands.size()) {
    throw InputError("task needs exactly one operator between each pair of operands");
  }
  for (int d : task.operands) {
    if (d < 0 || d > 9) throw InputError("task operands must be digits");
  }
  for (char op : task.operators) {
    if (op != '+' && op != '-') throw InputError("task operators must be '+' or '-'");
  }
  if (task.answer != evaluate_chain(task.operands, task.operators)) {
    throw InputError("task answer does not match its chain");
  }
}

}  // namespace sas::sim
