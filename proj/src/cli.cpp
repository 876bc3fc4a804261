#include "sas/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "sas/errors.hpp"
#include "sas/io/records.hpp"
#include "sas/metrics.hpp"
#include "sas/selection.hpp"
#include "sas/sim/trainer.hpp"
#include "sas/sim/truncation.hpp"

namespace sas::cli {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << content;
  if (!file) throw InputError("failed writing '" + path + "'");
}

SelectionMode parse_mode_flag(const std::string& name) {
  auto mode = parse_selection_mode(name);
  if (!mode) throw InputError("unknown mode '" + name + "'");
  return *mode;
}

std::string fixed4(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

struct ShapeOptions {
  std::string in_path;
  std::string out_path;
  std::string mode = "sas";
  double ratio = kDefaultSelectionRatio;
  std::uint64_t seed = 0;
  double epsilon = kDefaultStdEpsilon;
};

void cmd_shape(const ShapeOptions& opt, std::ostream& out) {
  const SelectionConfig selection{parse_mode_flag(opt.mode), opt.ratio, opt.seed};
  if (!(selection.ratio > 0.0 && selection.ratio < 1.0)) {
    throw InputError("ratio must be in (0,1)");
  }
  if (!(opt.epsilon > 0.0)) throw InputError("epsilon must be positive");

  auto in = open_input(opt.in_path);
  const auto records = io::read_rollout_records(in);
  if (records.empty()) throw InputError("no groups found");

  std::vector<std::vector<std::size_t>> members;
  const auto groups = io::group_records(records, &members);
  std::vector<io::AdvantageRecord> output(records.size());

  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& group = groups[g];
    const auto& rows = members[g];
    const auto violations = validate_group(group);
    if (!violations.empty()) {
      const auto& v = violations.front();
      std::size_t line = records[rows.front()].line;
      std::string who = "group '" + group.prompt_id + "'";
      if (v.rollout_id) {
        for (auto r : rows) {
          if (records[r].rollout.rollout_id == *v.rollout_id) line = records[r].line;
        }
        who = "rollout '" + *v.rollout_id + "'";
      }
      throw InputError("line " + std::to_string(line) + ": " + who + " " + v.field + ": " +
                       v.message);
    }

    const auto shaped = shape_group(group, selection, opt.epsilon);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& rollout = group.rollouts[i];
      const auto& mask = shaped.plan.per_rollout[i];
      io::AdvantageRecord rec;
      rec.prompt_id = rollout.prompt_id;
      rec.rollout_id = rollout.rollout_id;
      rec.stage = shaped.advantages.stage;
      rec.advantages = shaped.advantages.per_rollout[i];
      rec.masked_steps = mask.steps;
      if (selection.mode == SelectionMode::kTokenLevel) rec.masked_tokens = mask.tokens;
      for (double a : rec.advantages) {
        if (!std::isfinite(a)) throw NumericalError("non-finite advantage in " + rec.rollout_id);
      }
      output[rows[i]] = std::move(rec);
    }
  }

  std::string text;
  for (const auto& rec : output) text += io::serialize(rec) + "\n";
  emit(opt.out_path, text, out);
}

struct SimulateOptions {
  sim::TrainConfig config;
  std::string mode = "sas";
  std::string out_path;
};

void cmd_simulate(SimulateOptions opt, std::ostream& out) {
  opt.config.mode = parse_mode_flag(opt.mode);
  sim::validate_train_config(opt.config);
  const auto result = sim::train(opt.config);
  std::string csv = "step,mean_length,accuracy,entropy,mean_reward,truncation_rate\n";
  for (const auto& r : result.records) {
    csv += std::to_string(r.step) + "," + io::format_real(r.mean_length) + "," +
           io::format_real(r.accuracy) + "," + io::format_real(r.entropy) + "," +
           io::format_real(r.mean_reward) + "," + io::format_real(r.truncation_rate) + "\n";
  }
  emit(opt.out_path, csv, out);
}

void cmd_aes(AesInputs inputs, const std::vector<double>& positional, std::ostream& out,
             std::ostream& err) {
  if (!positional.empty()) {
    if (positional.size() != 4) {
      throw InputError("expected 4 positional values: base-acc base-len acc len");
    }
    inputs.acc_base = positional[0];
    inputs.len_base = positional[1];
    inputs.acc_model = positional[2];
    inputs.len_model = positional[3];
  }
  const double score = aes(inputs);
  for (const auto& w : aes_warnings(inputs)) err << "warning: " << w << "\n";
  out << fixed4(score) << "\n";
}

void cmd_ndcg(const std::string& confidence_path, const std::string& reference_path,
              std::size_t k, std::ostream& out) {
  auto conf_in = open_input(confidence_path);
  auto ref_in = open_input(reference_path);
  const auto confidence = io::read_ranked_scores(conf_in);
  const auto reference = io::read_ranked_scores(ref_in);
  out << fixed4(ndcg_at_k(confidence, reference, k)) << "\n";
}

void cmd_truncation_study(const std::string& in_path, std::size_t budget, std::ostream& out) {
  auto in = open_input(in_path);
  const auto records = io::read_rollout_records(in);
  if (records.empty()) throw InputError("no rollouts found");
  std::vector<sim::CorpusEntry> corpus;
  corpus.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.task || !rec.budget) {
      throw InputError("line " + std::to_string(rec.line) +
                       ": truncation study needs 'task' and 'budget' fields");
    }
    corpus.push_back({rec.rollout, *rec.task, *rec.budget});
  }
  const auto report = sim::truncation_study(corpus, budget);
  out << "budget: " << report.short_budget << "\n"
      << "originally_correct: " << report.originally_correct << "\n"
      << "flipped: " << report.flipped << "\n"
      << "flip_rate: " << fixed4(report.flip_rate) << "\n"
      << "lost_answer_only: " << report.lost_answer_only << "\n"
      << "lost_derivation_tail: " << report.lost_derivation_tail << "\n";
}

struct SampleOptions {
  std::size_t count = 1000;
  std::size_t budget = 64;
  std::uint64_t seed = 0;
  std::string out_path;
};

void cmd_sample(const SampleOptions& opt, std::ostream& out) {
  const sim::EnvConfig env;
  const auto policy = sim::make_base_policy(env);
  const auto corpus = sim::sample_corpus(policy, opt.count, opt.budget, opt.seed, env);
  std::string text;
  for (const auto& e : corpus) {
    io::RolloutRecord rec;
    rec.rollout = e.rollout;
    rec.prompt_text = e.task.prompt();
    rec.task = e.task;
    rec.budget = e.budget;
    text += io::serialize(rec) + "\n";
  }
  emit(opt.out_path, text, out);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Step-level advantage selection toolkit"};
  app.require_subcommand(1);

  ShapeOptions shape;
  auto* shape_cmd = app.add_subcommand("shape", "Compute selected advantages for a rollout file");
  shape_cmd->add_option("--in", shape.in_path, "Rollout file (one JSON record per line)")
      ->required();
  shape_cmd->add_option("--out", shape.out_path, "Advantage file (default: stdout)");
  shape_cmd->add_option("--mode", shape.mode,
                        "sas | sas-correct-only | random-steps | token-level | grpo-passthrough");
  shape_cmd->add_option("--ratio", shape.ratio, "Selection ratio in (0,1)");
  shape_cmd->add_option("--seed", shape.seed, "Seed for random-steps");
  shape_cmd->add_option("--epsilon", shape.epsilon, "Degenerate-group std threshold");

  SimulateOptions simulate;
  auto& tc = simulate.config;
  auto* sim_cmd = app.add_subcommand("simulate", "Train the toy policy and write dynamics CSV");
  sim_cmd->add_option("--mode", simulate.mode, "Selection mode");
  sim_cmd->add_option("--ratio", tc.ratio, "Selection ratio in (0,1)");
  sim_cmd->add_option("--group-size", tc.group_size, "Rollouts per prompt");
  sim_cmd->add_option("--context-budget", tc.context_budget, "Token budget per rollout");
  sim_cmd->add_option("--steps", tc.total_steps, "Training steps");
  sim_cmd->add_option("--seed", tc.seed, "Random seed");
  sim_cmd->add_option("--out", simulate.out_path, "CSV path (default: stdout)");
  sim_cmd->add_option("--tasks-per-step", tc.tasks_per_step, "Prompts per training step");
  sim_cmd->add_option("--learn-rate", tc.learn_rate, "Gradient ascent step size");
  sim_cmd->add_option("--clip-epsilon", tc.clip_epsilon, "Surrogate clip range");
  sim_cmd->add_option("--kl-coeff", tc.kl_coeff, "KL penalty coefficient");
  sim_cmd->add_option("--update-epochs", tc.update_epochs, "Gradient steps per batch");
  sim_cmd->add_option("--eval-every", tc.eval_every, "Steps between records");
  sim_cmd->add_option("--eval-tasks", tc.eval_tasks, "Held-out tasks per evaluation");

  AesInputs aes_in;
  std::vector<double> aes_positional;
  auto* aes_cmd = app.add_subcommand("aes", "Accuracy-Efficiency Score");
  aes_cmd->add_option("values", aes_positional, "base-acc base-len acc len");
  aes_cmd->add_option("--base-acc", aes_in.acc_base, "Base model accuracy");
  aes_cmd->add_option("--base-len", aes_in.len_base, "Base model mean length");
  aes_cmd->add_option("--acc", aes_in.acc_model, "Model accuracy");
  aes_cmd->add_option("--len", aes_in.len_model, "Model mean length");
  aes_cmd->add_option("--alpha", aes_in.alpha, "Length weight");
  aes_cmd->add_option("--beta", aes_in.beta, "Accuracy gain weight");
  aes_cmd->add_option("--gamma", aes_in.gamma, "Accuracy loss weight");

  std::string conf_path;
  std::string ref_path;
  std::size_t k = 10;
  auto* ndcg_cmd = app.add_subcommand("ndcg", "nDCG@k of a confidence ranking");
  ndcg_cmd->add_option("--confidence", conf_path, "Scores to rank by")->required();
  ndcg_cmd->add_option("--reference", ref_path, "Reference gains")->required();
  ndcg_cmd->add_option("--k", k, "Cutoff");

  std::string trunc_path;
  std::size_t trunc_budget = 0;
  auto* trunc_cmd =
      app.add_subcommand("truncation-study", "Re-verify a corpus after cutting to a budget");
  trunc_cmd->add_option("--in", trunc_path, "Simulator corpus file")->required();
  trunc_cmd->add_option("--budget", trunc_budget, "Short budget in tokens")->required();

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Write a simulator corpus from the base policy");
  sample_cmd->add_option("--count", sample.count, "Number of rollouts");
  sample_cmd->add_option("--budget", sample.budget, "Generation budget in tokens");
  sample_cmd->add_option("--seed", sample.seed, "Random seed");
  sample_cmd->add_option("--out", sample.out_path, "Output path (default: stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (shape_cmd->parsed()) {
      cmd_shape(shape, out);
    } else if (sim_cmd->parsed()) {
      cmd_simulate(simulate, out);
    } else if (aes_cmd->parsed()) {
      cmd_aes(aes_in, aes_positional, out, err);
    } else if (ndcg_cmd->parsed()) {
      cmd_ndcg(conf_path, ref_path, k, out);
    } else if (trunc_cmd->parsed()) {
      cmd_truncation_study(trunc_path, trunc_budget, out);
    } else if (sample_cmd->parsed()) {
      cmd_sample(sample, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace sas::cli
