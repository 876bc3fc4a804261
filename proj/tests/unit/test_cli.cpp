#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sas/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "sas");
  std::ostringstream out, err;
  const int code = sas::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SAS_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sas_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("aes command") {
  CHECK(run({"aes", "52.37", "5118", "54.54", "3407"}).out == "0.4586\n");
  CHECK(run({"aes", "37.44", "4416", "37.22", "2242"}).out == "0.4629\n");
  CHECK(run({"aes", "50", "1000", "50", "1000"}).out == "0.0000\n");
  CHECK(run({"aes", "--base-acc", "52.37", "--base-len", "5118", "--acc", "48.04", "--len", "1828"})
            .out == "0.2294\n");
  const auto bad = run({"aes", "0", "1000", "50", "1000"});
  CHECK(bad.code == sas::cli::kExitInput);
  CHECK(bad.err.find("error:") != std::string::npos);
  const auto warn = run({"aes", "50", "1000", "50", "900", "--gamma", "2"});
  CHECK(warn.code == 0);
  CHECK(warn.err.find("warning:") != std::string::npos);
}

TEST_CASE("shape output matches golden files") {
  for (const std::string file : {"group4", "corpus"}) {
    for (const std::string mode :
         {"grpo-passthrough", "sas", "sas-correct-only", "random-steps", "token-level"}) {
      const auto r = run({"shape", "--in", data(file + ".jsonl"), "--mode", mode, "--ratio", "0.3",
                          "--seed", "7"});
      CAPTURE(file);
      CAPTURE(mode);
      CHECK(r.code == 0);
      CHECK(r.out == slurp(data("golden/" + file + "." + mode + ".jsonl")));
    }
  }
}

TEST_CASE("shape writes to a file and is deterministic") {
  const auto path = scratch("shape.jsonl");
  CHECK(run({"shape", "--in", data("corpus.jsonl"), "--out", path.string()}).code == 0);
  const auto first = slurp(path);
  CHECK(run({"shape", "--in", data("corpus.jsonl"), "--out", path.string()}).code == 0);
  CHECK(slurp(path) == first);
  CHECK(first == slurp(data("golden/corpus.sas.jsonl")));
}

TEST_CASE("shape input errors") {
  const auto empty = scratch("empty.jsonl");
  std::ofstream(empty).close();
  auto r = run({"shape", "--in", empty.string()});
  CHECK(r.code == sas::cli::kExitInput);
  CHECK(r.err.find("no groups found") != std::string::npos);

  const auto bad = scratch("bad.jsonl");
  std::ofstream(bad) << slurp(data("group4.jsonl")) << "{\"prompt_id\":\"p1\"}\n";
  r = run({"shape", "--in", bad.string()});
  CHECK(r.code == sas::cli::kExitInput);
  CHECK(r.err.find("line 5:") != std::string::npos);

  const auto half = scratch("half.jsonl");
  auto text = slurp(data("group4.jsonl"));
  text.replace(text.find("\"reward\": 0"), 11, "\"reward\": 0.5");
  std::ofstream(half) << text;
  r = run({"shape", "--in", half.string()});
  CHECK(r.code == sas::cli::kExitInput);
  CHECK(r.err.find("line 2: rollout 'p1/r1' reward") != std::string::npos);

  r = run({"shape", "--in", data("group4.jsonl"), "--mode", "sas", "--ratio", "1.5"});
  CHECK(r.code == sas::cli::kExitInput);
  CHECK(r.err.find("ratio must be in (0,1)") != std::string::npos);
  CHECK(run({"shape", "--in", data("group4.jsonl"), "--mode", "fancy"}).code == sas::cli::kExitInput);
  CHECK(run({"shape", "--in", data("missing.jsonl")}).code == sas::cli::kExitInput);
}

TEST_CASE("simulate command") {
  auto r = run({"simulate", "--steps", "0"});
  CHECK(r.code == 0);
  CHECK(r.out == "step,mean_length,accuracy,entropy,mean_reward,truncation_rate\n");

  const std::vector<std::string> args{"simulate", "--steps", "6",     "--eval-every", "3",
                                      "--seed",   "5",       "--eval-tasks", "16"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 4);

  r = run({"simulate", "--mode", "sas", "--ratio", "1.5"});
  CHECK(r.code == sas::cli::kExitInput);
  CHECK(r.err.find("ratio must be in (0,1)") != std::string::npos);
  CHECK(run({"simulate", "--group-size", "1"}).code == sas::cli::kExitInput);
  CHECK(run({"simulate", "--context-budget", "5"}).code == sas::cli::kExitInput);

  r = run({"simulate", "--steps", "3", "--learn-rate", "1e300", "--kl-coeff", "1e10",
           "--eval-tasks", "8"});
  CHECK(r.code == sas::cli::kExitNumerical);
}

TEST_CASE("ndcg command") {
  const auto conf = scratch("conf.jsonl");
  const auto ref = scratch("ref.jsonl");
  std::ofstream(conf) << "{\"item\":\"a\",\"score\":0.1}\n{\"item\":\"b\",\"score\":0.5}\n"
                         "{\"item\":\"c\",\"score\":0.9}\n";
  std::ofstream(ref) << "{\"item\":\"a\",\"score\":3}\n{\"item\":\"b\",\"score\":2}\n"
                        "{\"item\":\"c\",\"score\":1}\n";
  auto r = run({"ndcg", "--confidence", conf.string(), "--reference", ref.string(), "--k", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.7900\n");
  CHECK(run({"ndcg", "--confidence", ref.string(), "--reference", ref.string()}).out == "1.0000\n");

  const auto other = scratch("other.jsonl");
  std::ofstream(other) << "{\"item\":\"z\",\"score\":1}\n";
  r = run({"ndcg", "--confidence", other.string(), "--reference", ref.string()});
  CHECK(r.code == sas::cli::kExitInput);
}

TEST_CASE("sample and truncation-study commands") {
  const auto corpus = scratch("corpus.jsonl");
  CHECK(run({"sample", "--count", "200", "--budget", "64", "--seed", "4", "--out",
             corpus.string()}).code == 0);

  auto r = run({"truncation-study", "--in", corpus.string(), "--budget", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("flip_rate: 1.0000\n") != std::string::npos);

  r = run({"truncation-study", "--in", corpus.string(), "--budget", "20"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("budget: 20\noriginally_correct: ", 0) == 0);

  r = run({"truncation-study", "--in", corpus.string(), "--budget", "64"});
  CHECK(r.code == sas::cli::kExitInput);

  r = run({"truncation-study", "--in", data("group4.jsonl"), "--budget", "3"});
  CHECK(r.code == sas::cli::kExitInput);
  CHECK(r.err.find("needs 'task' and 'budget'") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == sas::cli::kExitInput);
  CHECK(run({"bogus"}).code == sas::cli::kExitInput);
  CHECK(run({"--help"}).code == 0);
}
