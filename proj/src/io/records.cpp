#include "sas/io/records.hpp"

#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "sas/errors.hpp"

namespace sas::io {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) throw InputError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) throw InputError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

json parse_object(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON");
  if (!j.is_object()) throw InputError("record must be a JSON object");
  return j;
}

std::vector<std::size_t> index_array(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_array()) throw InputError(std::string("field '") + key + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned()) {
      throw InputError(std::string("field '") + key + "' must hold non-negative integers");
    }
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

sim::ChainTask parse_task(const json& j) {
  if (!j.is_object()) throw InputError("field 'task' must be an object");
  sim::ChainTask task;
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) throw InputError("task seed must be a non-negative integer");
    task.seed = it->get<std::uint64_t>();
  }
  const auto& ops = require(j, "operands");
  if (!ops.is_array()) throw InputError("task operands must be an array");
  for (const auto& o : ops) {
    if (!o.is_number_integer()) throw InputError("task operands must be integers");
    task.operands.push_back(o.get<int>());
  }
  for (char c : require_string(j, "operators")) task.operators.push_back(c);
  const auto& ans = require(j, "answer");
  if (!ans.is_number_integer()) throw InputError("task answer must be an integer");
  task.answer = ans.get<int>();
  sim::validate_task(task);
  return task;
}

json task_json(const sim::ChainTask& task) {
  return json{{"seed", task.seed},
              {"operands", task.operands},
              {"operators", std::string(task.operators.begin(), task.operators.end())},
              {"answer", task.answer}};
}

}  // namespace

bool RolloutRecord::operator==(const RolloutRecord& other) const {
  return rollout == other.rollout && index == other.index && prompt_text == other.prompt_text &&
         task == other.task && budget == other.budget;
}

std::string format_real(double value) { return json(value).dump(); }

RolloutRecord parse_rollout_record(std::string_view line) {
  const json j = parse_object(line);
  RolloutRecord rec;
  auto& r = rec.rollout;
  r.prompt_id = require_string(j, "prompt_id");
  r.rollout_id = require_string(j, "rollout_id");
  r.reward = require_number(j, "reward");
  const auto& truncated = require(j, "truncated");
  if (!truncated.is_boolean()) throw InputError("field 'truncated' must be a boolean");
  r.truncated = truncated.get<bool>();

  const auto& tokens = require(j, "tokens");
  if (!tokens.is_array()) throw InputError("field 'tokens' must be an array");
  for (const auto& t : tokens) {
    if (!t.is_object()) throw InputError("each token must be an object");
    Token tok;
    tok.text = require_string(t, "text");
    tok.logprob = require_number(t, "logprob");
    if (auto it = t.find("id"); it != t.end()) {
      if (!it->is_number_integer()) throw InputError("token id must be an integer");
      tok.id = it->get<int>();
    }
    r.tokens.push_back(std::move(tok));
  }

  if (auto it = j.find("index"); it != j.end()) {
    if (!it->is_number_integer()) throw InputError("field 'index' must be an integer");
    rec.index = it->get<long long>();
  }
  if (auto it = j.find("prompt"); it != j.end()) {
    if (!it->is_string()) throw InputError("field 'prompt' must be a string");
    rec.prompt_text = it->get<std::string>();
  }
  if (auto it = j.find("task"); it != j.end()) rec.task = parse_task(*it);
  if (auto it = j.find("budget"); it != j.end()) {
    if (!it->is_number_unsigned()) throw InputError("field 'budget' must be a positive integer");
    rec.budget = it->get<std::size_t>();
  }
  return rec;
}

std::string serialize(const RolloutRecord& rec) {
  const auto& r = rec.rollout;
  json tokens = json::array();
  for (const auto& t : r.tokens) {
    json tok{{"text", t.text}, {"logprob", t.logprob}};
    if (t.id >= 0) tok["id"] = t.id;
    tokens.push_back(std::move(tok));
  }
  // ordered_json keeps the documented key order on disk.
  nlohmann::ordered_json j;
  j["prompt_id"] = r.prompt_id;
  j["rollout_id"] = r.rollout_id;
  if (rec.index) j["index"] = *rec.index;
  if (rec.prompt_text) j["prompt"] = *rec.prompt_text;
  j["reward"] = r.reward;
  j["truncated"] = r.truncated;
  if (rec.task) j["task"] = task_json(*rec.task);
  if (rec.budget) j["budget"] = *rec.budget;
  j["tokens"] = std::move(tokens);
  return j.dump();
}

std::vector<RolloutRecord> read_rollout_records(std::istream& in) {
  std::vector<RolloutRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto rec = parse_rollout_record(line);
      rec.line = number;
      out.push_back(std::move(rec));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

void write_rollout_records(std::ostream& out, const std::vector<RolloutRecord>& records) {
  for (const auto& r : records) out << serialize(r) << '\n';
}

std::vector<RolloutGroup> group_records(const std::vector<RolloutRecord>& records,
                                        std::vector<std::vector<std::size_t>>* members) {
  std::vector<RolloutGroup> groups;
  std::vector<std::vector<std::size_t>> positions;
  std::unordered_map<std::string, std::size_t> by_prompt;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    auto [it, inserted] = by_prompt.emplace(rec.rollout.prompt_id, groups.size());
    if (inserted) {
      RolloutGroup g;
      g.prompt_id = rec.rollout.prompt_id;
      groups.push_back(std::move(g));
      positions.emplace_back();
    }
    auto& g = groups[it->second];
    if (g.prompt_text.empty() && rec.prompt_text) g.prompt_text = *rec.prompt_text;
    g.rollouts.push_back(rec.rollout);
    positions[it->second].push_back(i);
  }
  if (members) *members = std::move(positions);
  return groups;
}

AdvantageRecord parse_advantage_record(std::string_view line) {
  const json j = parse_object(line);
  AdvantageRecord rec;
  rec.prompt_id = require_string(j, "prompt_id");
  rec.rollout_id = require_string(j, "rollout_id");
  const auto stage = require_string(j, "stage");
  if (stage == "raw") {
    rec.stage = AdvantageStage::kRaw;
  } else if (stage == "selected") {
    rec.stage = AdvantageStage::kSelected;
  } else {
    throw InputError("unknown stage '" + stage + "'");
  }
  const auto& adv = require(j, "advantages");
  if (!adv.is_array()) throw InputError("field 'advantages' must be an array");
  for (const auto& a : adv) {
    if (!a.is_number()) throw InputError("advantages must be numbers");
    rec.advantages.push_back(a.get<double>());
  }
  rec.masked_steps = index_array(j, "masked_steps");
  if (j.contains("masked_tokens")) rec.masked_tokens = index_array(j, "masked_tokens");
  return rec;
}

std::string serialize(const AdvantageRecord& rec) {
  nlohmann::ordered_json j;
  j["prompt_id"] = rec.prompt_id;
  j["rollout_id"] = rec.rollout_id;
  j["stage"] = to_string(rec.stage);
  j["advantages"] = rec.advantages;
  j["masked_steps"] = rec.masked_steps;
  if (rec.masked_tokens) j["masked_tokens"] = *rec.masked_tokens;
  return j.dump();
}

RankedScores read_ranked_scores(std::istream& in) {
  RankedScores out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = parse_object(line);
      out.items.emplace_back(require_string(j, "item"), require_number(j, "score"));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sas::io
