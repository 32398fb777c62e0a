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

#include "rfsdrive/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "rfsdrive/cli/run_config.hpp"
#include "rfsdrive/data/generator.hpp"
#include "rfsdrive/data/records.hpp"
#include "rfsdrive/data/scenario.hpp"
#include "rfsdrive/errors.hpp"
#include "rfsdrive/model/network.hpp"
#include "rfsdrive/train/evaluate.hpp"
#include "rfsdrive/train/pipeline_check.hpp"
#include "rfsdrive/train/trainer.hpp"

namespace rfsdrive::cli
{

namespace
{

namespace fs = std::filesystem;

std::string fmt(double v)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_text(const fs::path & path, const std::string & text)
{
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw IoError("cannot write " + path.string());
  }
  f << text;
}

fs::path report_dir(const fs::path & stem)
{
  return stem.has_parent_path() ? stem.parent_path() : fs::path(".");
}

std::vector<double> parse_checkpoints(const std::string & text)
{
  std::vector<double> out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size() || !(v > 0.0)) {
      throw ConfigError("--checkpoints: cannot parse \"" + std::string(item) + "\"");
    }
    out.push_back(v);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (out.empty()) {
    throw ConfigError("--checkpoints: at least one checkpoint time is required");
  }
  return out;
}

std::string summary_line(const train::EvalReport & r)
{
  return "n=" + std::to_string(r.rows.size()) + " rfs_mean=" + fmt(r.rfs_mean) +
         " rfs_stderr=" + fmt(r.rfs_stderr) + " ade3_mean=" + fmt(r.ade3_mean) +
         " ade5_mean=" + fmt(r.ade5_mean);
}

struct GenArgs
{
  fs::path out;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double split = 0.875;
  double noise = 0.0;
};

int cmd_gen(const GenArgs & a, std::ostream & out)
{
  data::GeneratorOptions opts;
  opts.noise_scale = a.noise;
  const auto split = data::generate(a.n, a.seed, a.split, opts);
  data::write_split(a.out, split);
  write_text(
    a.out / "run_config.cfg", "# resolved run configuration\nseed = " + std::to_string(a.seed) +
                                "\ngen.n = " + std::to_string(a.n) + "\ngen.split = " + fmt(a.split) +
                                "\ngen.noise = " + fmt(a.noise) + "\n");
  out << "wrote " << split.train.size() << " training and " << split.val.size()
      << " validation scenarios to " << a.out.string() << "\n";
  return kOk;
}

struct TrainArgs
{
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  fs::path data;
  fs::path out;
};

RunConfig resolve_config(
  const std::string & file, const std::vector<std::string> & overrides, std::optional<std::uint64_t> seed)
{
  RunConfig cfg;
  if (!file.empty()) {
    apply_file(cfg, file);
  }
  for (const auto & o : overrides) {
    apply_override(cfg, o);
  }
  if (seed) {
    cfg.seed = *seed;
  }
  resolve(cfg);
  return cfg;
}

std::vector<data::Scenario> load_any_horizon(const fs::path & path)
{
  if (!fs::exists(path)) {
    throw IoError("missing data file " + path.string());
  }
  data::LoadOptions lo;
  lo.horizon = std::nullopt;
  return data::load(path, lo);
}

int cmd_train(const TrainArgs & a, std::ostream & out)
{
  RunConfig cfg = resolve_config(a.config, a.overrides, a.seed);
  const auto train_set = load_any_horizon(a.data / "train.jsonl");
  const auto val_set = load_any_horizon(a.data / "val.jsonl");
  cfg.train.checkpoint_dir = a.out;
  write_echo(a.out, cfg);
  auto m = model::Model::create(cfg.model, cfg.seed);
  const auto result = train::train_loop(m, train_set, val_set, cfg.train, cfg.loss, [&](const auto & row) {
    out << "step " << row.step << " loss=" << fmt(row.loss) << " rfs_mean=" << fmt(row.rfs_mean)
        << " ade3=" << fmt(row.ade3) << " ade5=" << fmt(row.ade5) << "\n";
    out.flush();
  });
  out << "final checkpoint " << (a.out / "final.ckpt").string() << "\n";
  return kOk;
}

struct EvalArgs
{
  fs::path ckpt;
  fs::path data;
  fs::path report;
};

int cmd_eval(const EvalArgs & a, std::ostream & out)
{
  if (!fs::exists(a.ckpt)) {
    throw IoError("missing checkpoint " + a.ckpt.string());
  }
  const auto m = model::Model::load(a.ckpt);
  const fs::path data_path = fs::is_directory(a.data) ? a.data / "val.jsonl" : a.data;
  const auto scenarios = load_any_horizon(data_path);
  const auto report = train::evaluate(m, scenarios);
  train::write_report(a.report, report);
  RunConfig echo;
  echo.seed = m.seed();
  echo.model = m.config();
  write_echo(report_dir(a.report), echo);
  out << summary_line(report) << "\n";
  return kOk;
}

struct GradArgs
{
  std::uint64_t seed = 0;
  double eps = 1e-6;
  std::size_t coords = 8;
  std::string config;
  std::vector<std::string> overrides;
};

int cmd_gradcheck(const GradArgs & a, std::ostream & out)
{
  RunConfig cfg = resolve_config(a.config, a.overrides, a.seed);
  train::PipelineCheckOptions opts;
  opts.seed = cfg.seed;
  opts.eps = a.eps;
  opts.coords_per_tensor = a.coords;
  opts.model = cfg.model;
  opts.loss = cfg.loss;
  const auto r = train::check_pipeline_gradients(opts);
  out << "max relative error: " << fmt(r.report.max_rel_error) << "\n"
      << "worst: " << r.worst_parameter << "[" << r.report.worst_element
      << "] analytic=" << fmt(r.report.worst_analytic) << " numeric=" << fmt(r.report.worst_numeric)
      << "\n"
      << "coordinates: " << r.report.coords_checked << " checked, " << r.report.coords_failed
      << " above " << fmt(kGradCheckThreshold) << "; max absolute error "
      << fmt(r.report.max_abs_error) << "\n"
      << "scenario " << r.scenario_id << ", kink distance " << fmt(r.kink_distance) << "\n";
  return r.report.max_rel_error > kGradCheckThreshold ? kGradCheckAboveThreshold : kOk;
}

struct ScoreArgs
{
  fs::path pred;
  fs::path ref;
  fs::path report;
  std::string checkpoints = "3,5";
};

int cmd_score(const ScoreArgs & a, std::ostream & out)
{
  RfsOptions opts;
  opts.checkpoints = parse_checkpoints(a.checkpoints);
  for (const auto & p : {a.pred, a.ref}) {
    if (!fs::exists(p)) {
      throw IoError("missing file " + p.string());
    }
  }
  const auto preds = data::load_predictions(a.pred);
  const auto refs = data::load_references(a.ref);
  std::map<std::string, const data::PredictionRecord *> by_id;
  for (const auto & p : preds) {
    if (!by_id.emplace(p.id, &p).second) {
      throw IngestionError("duplicate prediction id " + p.id);
    }
  }
  std::set<std::string> ref_ids;
  std::vector<std::string> missing;
  for (const auto & r : refs) {
    if (!ref_ids.insert(r.id).second) {
      throw IngestionError("duplicate reference id " + r.id);
    }
    if (!by_id.count(r.id)) {
      missing.push_back(r.id);
    }
  }
  std::vector<std::string> extra;
  for (const auto & [id, p] : by_id) {
    if (!ref_ids.count(id)) {
      extra.push_back(id);
    }
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "prediction and reference ids differ;";
    const auto list = [&](const char * label, const std::vector<std::string> & ids) {
      if (!ids.empty()) {
        msg += std::string(" ") + label + ":";
        for (const auto & id : ids) {
          msg += " " + id;
        }
        msg += ";";
      }
    };
    list("missing predictions", missing);
    list("extra predictions", extra);
    msg.pop_back();
    throw IngestionError(msg);
  }
  std::vector<train::EvalRow> rows;
  for (const auto & r : refs) {
    rows.push_back(train::score_prediction(r.id, by_id.at(r.id)->traj, r.raters, opts));
  }
  const auto report = train::summarize(std::move(rows));
  train::write_report(a.report, report);
  write_text(
    report_dir(a.report) / "run_config.cfg",
    "# resolved run configuration\nscore.checkpoints = " + a.checkpoints + "\n");
  out << summary_line(report) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"rfsdrive: rater-feedback-score planning toolkit"};
  app.require_subcommand(1, 1);

  const auto unit_interval = CLI::Validator(
    [](std::string & s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (const std::exception &) {
        return "not a number";
      }
      return (v > 0.0 && v < 1.0) ? std::string() : std::string("must lie strictly between 0 and 1");
    },
    "(0,1)");

  GenArgs gen;
  auto * g = app.add_subcommand("gen", "Generate synthetic train/val scenario files");
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--n", gen.n, "Number of scenarios")->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Root seed");
  g->add_option("--split", gen.split, "Training fraction")->check(unit_interval);
  g->add_option("--noise", gen.noise, "Past-state noise standard deviation")->check(CLI::NonNegativeNumber);

  TrainArgs tr;
  auto * t = app.add_subcommand("train", "Train a model");
  t->add_option("--config", tr.config, "key = value configuration file");
  t->add_option("--set", tr.overrides, "key=value override (repeatable)");
  t->add_option("--seed", tr.seed, "Root seed (overrides the config file)");
  t->add_option("--data", tr.data, "Directory holding train.jsonl and val.jsonl")->required();
  t->add_option("--out", tr.out, "Run directory: checkpoints, metrics.jsonl, run_config.cfg")->required();

  EvalArgs ev;
  auto * e = app.add_subcommand("eval", "Evaluate a checkpoint");
  e->add_option("--ckpt", ev.ckpt, "Checkpoint file")->required();
  e->add_option("--data", ev.data, "Scenario file, or a directory holding val.jsonl")->required();
  e->add_option("--report", ev.report, "Report path stem; writes <stem>.json and <stem>.csv")->required();

  GradArgs gc;
  auto * c = app.add_subcommand("gradcheck", "Full-pipeline gradient check");
  c->add_option("--seed", gc.seed, "Seed for model, scenario and coordinate sampling");
  c->add_option("--eps", gc.eps, "Central-difference step")->check(CLI::PositiveNumber);
  c->add_option("--coords", gc.coords, "Sampled elements per parameter tensor (0 = all)");
  c->add_option("--config", gc.config, "key = value configuration file");
  c->add_option("--set", gc.overrides, "key=value override (repeatable)");

  ScoreArgs sc;
  auto * s = app.add_subcommand("score", "Score external predictions against references");
  s->add_option("--pred", sc.pred, "Prediction records")->required();
  s->add_option("--ref", sc.ref, "Scenario or rater-only records")->required();
  s->add_option("--report", sc.report, "Report path stem")->required();
  s->add_option("--checkpoints", sc.checkpoints, "Comma-separated checkpoint times in seconds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp & ex) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError & ex) {
    err << "usage error: " << ex.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (g->parsed()) {
      return cmd_gen(gen, out);
    }
    if (t->parsed()) {
      return cmd_train(tr, out);
    }
    if (e->parsed()) {
      return cmd_eval(ev, out);
    }
    if (c->parsed()) {
      return cmd_gradcheck(gc, out);
    }
    return cmd_score(sc, out);
  } catch (const ConfigError & ex) {
    err << "config error: " << ex.what() << "\n";
  } catch (const std::exception & ex) {
    err << "error: " << ex.what() << "\n";
  }
  return kFailure;
}

}  // namespace rfsdrive::cli
