#include "sas/segmentation.hpp"

#include "sas/errors.hpp"

namespace sas {

std::vector<ByteRange> split_steps(std::string_view text) {
  std::vector<ByteRange> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i + 1 < text.size()) {
    if (text[i] == '\n' && text[i + 1] == '\n') {
      out.push_back({start, i + 2});
      start = i + 2;
      i = start;
    } else {
      ++i;
    }
  }
  if (start < text.size()) out.push_back({start, text.size()});
  return out;
}

StepPartition segment(const Rollout& rollout) {
  if (rollout.tokens.empty()) {
    throw InputError("cannot segment rollout '" + rollout.rollout_id + "' without tokens");
  }
  const std::string text = rollout.text();
  if (text.empty()) {
    throw InputError("cannot segment rollout '" + rollout.rollout_id + "' with empty text");
  }
  const auto ranges = split_steps(text);

  StepPartition partition;
  partition.rollout_id = rollout.rollout_id;

  std::size_t range_idx = 0;
  std::size_t offset = 0;
  for (std::size_t t = 0; t < rollout.tokens.size(); ++t) {
    const std::size_t first_byte = offset;
    offset += rollout.tokens[t].text.size();
    if (first_byte >= text.size()) {
      // Zero-length tail token; it rides with the last step.
      partition.steps.back().token_indices.push_back(t);
      continue;
    }
    bool opens_step = partition.steps.empty();
    while (ranges[range_idx].end <= first_byte) {
      ++range_idx;
      opens_step = true;
    }
    if (opens_step) {
      Step step;
      step.bytes.begin = ranges[range_idx].begin;
      partition.steps.push_back(std::move(step));
    }
    partition.steps.back().token_indices.push_back(t);
  }

  // Each step runs up to the start of the next one; spans skipped by a
  // straddling token are absorbed by the step before them.
  for (std::size_t j = 0; j < partition.steps.size(); ++j) {
    auto& step = partition.steps[j];
    step.index = j + 1;
    step.bytes.end = j + 1 < partition.steps.size() ? partition.steps[j + 1].bytes.begin
                                                    : text.size();
    step.text = text.substr(step.bytes.begin, step.bytes.size());
  }
  return partition;
}

}  // namespace sas
