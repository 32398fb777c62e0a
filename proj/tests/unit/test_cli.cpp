// Copyright 2026 The rfsdrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rfsdrive/cli/app.hpp"
#include "rfsdrive/cli/run_config.hpp"
#include "rfsdrive/data/records.hpp"
#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/errors.hpp"
#include "rfsdrive/random.hpp"

namespace cli = rfsdrive::cli;
namespace data = rfsdrive::data;
namespace fs = std::filesystem;
using rfsdrive::ConfigError;

namespace
{

struct Result
{
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string> & args)
{
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir(const std::string & name)
{
  const fs::path dir = fs::temp_directory_path() / ("rfsdrive_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path & p, const std::string & text)
{
  std::ofstream(p, std::ios::binary) << text;
}

std::size_t line_count(const fs::path & p)
{
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const char * kSmallModel =
  "# narrow network for fast runs\n"
  "model.tokens_per_view = 4\n"
  "model.d_img = 8\n"
  "model.d_model = 16\n"
  "model.n_queries = 4\n"
  "model.planner_layers = 1\n"
  "model.heads = 2\n"
  "model.ffn_mult = 2\n"
  "train.steps = 4\n"
  "train.eval_every = 2\n";

// Predictions copied from the top rater of each reference record.
std::vector<data::PredictionRecord> perfect_predictions(const fs::path & ref)
{
  std::vector<data::PredictionRecord> out;
  for (const auto & r : data::load_references(ref)) {
    out.push_back({r.id, r.raters.front().traj});
  }
  return out;
}

}  // namespace

TEST(Cli, GenSplitArithmeticAndDeterminism)
{
  const fs::path dir = scratch_dir("gen");
  const auto a = run({"gen", "--out", (dir / "a").string(), "--n", "1024", "--seed", "7", "--split", "0.875"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(line_count(dir / "a" / "train.jsonl"), 896u);
  EXPECT_EQ(line_count(dir / "a" / "val.jsonl"), 128u);
  EXPECT_TRUE(fs::exists(dir / "a" / "run_config.cfg"));
  const auto b = run({"gen", "--out", (dir / "b").string(), "--n", "1024", "--seed", "7", "--split", "0.875"});
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char * f : {"train.jsonl", "val.jsonl", "run_config.cfg"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
}

TEST(Cli, UsageErrors)
{
  const fs::path dir = scratch_dir("usage");
  auto r = run({"gen", "--out", dir.string(), "--n", "0"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("usage error"), std::string::npos);
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"fly"}).code, cli::kUsage);
  EXPECT_EQ(run({"gen", "--out", dir.string(), "--n", "4", "--split", "1.5"}).code, cli::kUsage);
  EXPECT_EQ(run({"eval", "--ckpt", "x"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, RunConfigParsing)
{
  cli::RunConfig c;
  cli::apply_text(c, "seed = 9\n# comment\n\nmodel.d_model = 64\nloss.use_speed_scaling = false\n", "test");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.model.d_model, 64u);
  EXPECT_FALSE(c.loss.use_speed_scaling);
  cli::apply_override(c, "train.learning_rate=5e-4");
  EXPECT_EQ(c.train.learning_rate, 5e-4);
  cli::resolve(c);
  EXPECT_EQ(c.train.seed, 9u);

  // The echo parses back to the same configuration.
  cli::RunConfig again;
  cli::apply_text(again, cli::to_text(c), "echo");
  EXPECT_EQ(cli::to_text(again), cli::to_text(c));
  for (const auto & key : cli::config_keys()) {
    EXPECT_EQ(cli::get_value(again, key), cli::get_value(c, key)) << key;
  }
}

TEST(Cli, RunConfigConflictsAndUnknownKeys)
{
  cli::RunConfig c;
  try {
    cli::apply_text(c, "seed = 1\nmodel.heads = 4\nseed = 2\n", "run.cfg");
    FAIL() << "expected a conflict";
  } catch (const ConfigError & e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("seed"), std::string::npos) << what;
    EXPECT_NE(what.find("line 1"), std::string::npos) << what;
    EXPECT_NE(what.find("run.cfg:3"), std::string::npos) << what;
  }
  EXPECT_THROW(cli::apply_text(c, "model.colour = red\n", "x"), ConfigError);
  EXPECT_THROW(cli::apply_text(c, "model.d_model = lots\n", "x"), ConfigError);
  EXPECT_THROW(cli::apply_text(c, "just words\n", "x"), ConfigError);
  EXPECT_THROW(cli::apply_override(c, "novalue"), ConfigError);
  cli::RunConfig bad;
  bad.model.heads = 3;
  EXPECT_THROW(cli::resolve(bad), ConfigError);
}

TEST(Cli, TrainRejectsConflictingConfig)
{
  const fs::path dir = scratch_dir("conflict");
  write(dir / "run.cfg", "train.steps = 3\ntrain.steps = 4\n");
  ASSERT_EQ(run({"gen", "--out", (dir / "data").string(), "--n", "8", "--seed", "1"}).code, 0);
  const auto r = run(
    {"train", "--config", (dir / "run.cfg").string(), "--data", (dir / "data").string(), "--out",
     (dir / "run").string()});
  EXPECT_EQ(r.code, cli::kFailure);
  EXPECT_NE(r.err.find("config error"), std::string::npos) << r.err;
  EXPECT_EQ(
    run({"train", "--data", (dir / "data").string(), "--out", (dir / "run").string(), "--set",
         "model.heads=5"})
      .code,
    cli::kFailure);
  EXPECT_EQ(
    run({"train", "--data", (dir / "missing").string(), "--out", (dir / "run").string()}).code,
    cli::kFailure);
}

TEST(Cli, TrainEvalEndToEndIsReproducible)
{
  const fs::path dir = scratch_dir("e2e");
  write(dir / "small.cfg", kSmallModel);
  for (const char * tag : {"a", "b"}) {
    const fs::path root = dir / tag;
    ASSERT_EQ(run({"gen", "--out", (root / "data").string(), "--n", "24", "--seed", "3"}).code, 0);
    const auto t = run(
      {"train", "--config", (dir / "small.cfg").string(), "--data", (root / "data").string(),
       "--out", (root / "run").string(), "--seed", "5"});
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_NE(t.out.find("step 2 loss="), std::string::npos) << t.out;
    const auto e = run(
      {"eval", "--ckpt", (root / "run" / "final.ckpt").string(), "--data",
       (root / "data").string(), "--report", (root / "eval" / "report").string()});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_NE(e.out.find("rfs_mean="), std::string::npos);
  }
  for (const char * f :
       {"run/final.ckpt", "run/step_000002.ckpt", "run/metrics.jsonl", "run/run_config.cfg",
        "eval/report.json", "eval/report.csv", "eval/run_config.cfg"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    EXPECT_FALSE(slurp(dir / "a" / f).empty()) << f;
  }
  const std::string echo = slurp(dir / "a" / "run" / "run_config.cfg");
  EXPECT_NE(echo.find("seed = 5"), std::string::npos) << echo;
  EXPECT_NE(echo.find("model.d_model = 16"), std::string::npos) << echo;
  const std::string csv = slurp(dir / "a" / "eval" / "report.csv");
  EXPECT_EQ(csv.rfind("scenario_id,rfs,ade3,ade5\n", 0), 0u);
  EXPECT_NE(csv.find("\nmean,"), std::string::npos);
  EXPECT_NE(csv.find("\nstderr,"), std::string::npos);
}

TEST(Cli, EvalRejectsHorizonMismatch)
{
  const fs::path dir = scratch_dir("horizon");
  write(dir / "small.cfg", kSmallModel);
  ASSERT_EQ(run({"gen", "--out", (dir / "data").string(), "--n", "8", "--seed", "2"}).code, 0);
  ASSERT_EQ(
    run({"train", "--config", (dir / "small.cfg").string(), "--data", (dir / "data").string(),
         "--out", (dir / "run").string(), "--set", "train.steps=1"})
      .code,
    0);
  auto scenarios = data::load(dir / "data" / "val.jsonl");
  for (auto & s : scenarios) {
    s.future->waypoints.resize(10);
    s.raters[0].traj.waypoints.resize(10);
  }
  data::save(dir / "short.jsonl", scenarios);
  const auto r = run(
    {"eval", "--ckpt", (dir / "run" / "final.ckpt").string(), "--data",
     (dir / "short.jsonl").string(), "--report", (dir / "rep").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("horizon mismatch"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("10"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("20"), std::string::npos) << r.err;
}

TEST(Cli, ScorePerfectAndOffsetPredictions)
{
  const fs::path dir = scratch_dir("score");
  ASSERT_EQ(run({"gen", "--out", (dir / "data").string(), "--n", "20", "--seed", "4"}).code, 0);
  const fs::path ref = dir / "data" / "val.jsonl";
  auto preds = perfect_predictions(ref);
  data::save_predictions(dir / "perfect.jsonl", preds);
  auto r = run({"score", "--pred", (dir / "perfect.jsonl").string(), "--ref", ref.string(), "--report",
                (dir / "perfect").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(dir / "perfect.csv"));
  std::string line;
  std::getline(csv, line);
  std::size_t rows = 0;
  while (std::getline(csv, line) && line.rfind("mean,", 0) != 0) {
    EXPECT_NE(line.find(",10,0,0"), std::string::npos) << line;
    ++rows;
  }
  EXPECT_EQ(rows, preds.size());
  EXPECT_EQ(line.rfind("mean,10,0,0", 0), 0u) << line;

  // Rater-only reference: straight at 12 m/s; the prediction sits
  // 2 tau_lat to the left at both checkpoints.
  std::ostringstream rater_line;
  std::ostringstream pred_line;
  rater_line << "{\"id\":\"solo\",\"raters\":[{\"score\":10,\"waypoints\":[";
  pred_line << "{\"id\":\"solo\",\"waypoints\":[";
  for (int i = 1; i <= 20; ++i) {
    const double x = 3.0 * i;
    const double y = i == 12 ? 2.0 : (i == 20 ? 3.6 : 0.0);
    rater_line << (i > 1 ? "," : "") << "[" << x << ",0]";
    pred_line << (i > 1 ? "," : "") << "[" << x << "," << y << "]";
  }
  rater_line << "]}]}\n";
  pred_line << "]}\n";
  write(dir / "solo_ref.jsonl", rater_line.str());
  write(dir / "solo_pred.jsonl", pred_line.str());
  r = run({"score", "--pred", (dir / "solo_pred.jsonl").string(), "--ref",
           (dir / "solo_ref.jsonl").string(), "--report", (dir / "solo").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "solo.csv").find("solo,1,"), std::string::npos) << slurp(dir / "solo.csv");
}

TEST(Cli, ScoreIsOrderIndependent)
{
  const fs::path dir = scratch_dir("order");
  ASSERT_EQ(run({"gen", "--out", (dir / "data").string(), "--n", "30", "--seed", "6"}).code, 0);
  const fs::path ref = dir / "data" / "val.jsonl";
  auto preds = perfect_predictions(ref);
  // Perturb so the rows are not all identical.
  rfsdrive::Rng rng(6);
  for (auto & p : preds) {
    for (auto & w : p.traj.waypoints) {
      w.x += rng.uniform(-2.0, 2.0);
      w.y += rng.uniform(-1.0, 1.0);
    }
  }
  data::save_predictions(dir / "p1.jsonl", preds);
  const auto perm = rng.permutation(preds.size());
  std::vector<data::PredictionRecord> shuffled;
  for (auto i : perm) {
    shuffled.push_back(preds[i]);
  }
  data::save_predictions(dir / "p2.jsonl", shuffled);
  ASSERT_NE(slurp(dir / "p1.jsonl"), slurp(dir / "p2.jsonl"));
  for (const char * tag : {"p1", "p2"}) {
    const auto r = run({"score", "--pred", (dir / (std::string(tag) + ".jsonl")).string(), "--ref",
                        ref.string(), "--report", (dir / tag / "rep").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(dir / "p1" / "rep.csv"), slurp(dir / "p2" / "rep.csv"));
  EXPECT_EQ(slurp(dir / "p1" / "rep.json"), slurp(dir / "p2" / "rep.json"));
}

TEST(Cli, ScoreListsMismatchedIds)
{
  const fs::path dir = scratch_dir("ids");
  ASSERT_EQ(run({"gen", "--out", (dir / "data").string(), "--n", "10", "--seed", "8"}).code, 0);
  const fs::path ref = dir / "data" / "val.jsonl";
  auto preds = perfect_predictions(ref);
  const std::string dropped = preds.front().id;
  preds.erase(preds.begin());
  preds.push_back({"stranger", preds.front().traj});
  data::save_predictions(dir / "p.jsonl", preds);
  const auto r = run({"score", "--pred", (dir / "p.jsonl").string(), "--ref", ref.string(),
                      "--report", (dir / "rep").string()});
  EXPECT_EQ(r.code, cli::kFailure);
  EXPECT_NE(r.err.find("missing predictions: " + dropped), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("extra predictions: stranger"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "rep.csv"));
}

TEST(Cli, GradcheckReportsAndExitCodeTracksThreshold)
{
  const fs::path dir = scratch_dir("gradcheck");
  write(dir / "small.cfg", kSmallModel);
  const auto r = run({"gradcheck", "--config", (dir / "small.cfg").string(), "--seed", "3", "--coords", "4"});
  const std::string key = "max relative error: ";
  const auto at = r.out.find(key);
  ASSERT_NE(at, std::string::npos) << r.out << r.err;
  const double reported = std::stod(r.out.substr(at + key.size()));
  EXPECT_EQ(r.code, reported < cli::kGradCheckThreshold ? cli::kOk : cli::kGradCheckAboveThreshold);
  EXPECT_EQ(run({"gradcheck", "--eps", "-1"}).code, cli::kUsage);
}
