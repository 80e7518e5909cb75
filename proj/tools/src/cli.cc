// Copyright 2026 The VCC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vcc_tools/cli.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "vcc/analysis.h"
#include "vcc/checkpoint.h"
#include "vcc/dataset.h"
#include "vcc/encoders.h"
#include "vcc/errors.h"
#include "vcc/evaluator.h"
#include "vcc/synthetic.h"
#include "vcc/text_util.h"
#include "vcc/trainer.h"
#include "vcc_tools/manifest.h"

namespace vcc::tools {
namespace fs = std::filesystem;
namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LookupError("cannot write " + path.string());
  out << text;
}

void RequireFile(const std::string &path, const std::string &what) {
  if (!fs::is_regular_file(path)) {
    throw LookupError(what + " not found: " + path);
  }
}

fs::path WithSuffix(const fs::path &path, const std::string &suffix) {
  return fs::path(path.string() + suffix);
}

// "key = value" lines with '#' comments.
std::map<std::string, std::string> ReadKeyValues(std::istream &in,
                                                 const std::string &source) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    kv[Trim(std::string_view(trimmed).substr(0, eq))] =
        Trim(std::string_view(trimmed).substr(eq + 1));
  }
  return kv;
}

// Numbers stay numbers in the manifest.
Json ConfigValue(const std::string &text) {
  Json parsed = Json::parse(text, nullptr, false);
  if (!parsed.is_discarded() && parsed.is_number()) return parsed;
  return text;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// synth ----------------------------------------------------------------------

struct SynthOptions {
  std::string config;
  std::string out;
  std::string manifest;
  std::optional<double> rho;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> train_videos;
  std::optional<std::size_t> dev_videos;
  std::optional<std::size_t> test_videos;
  std::optional<std::size_t> rules;
};

int RunSynth(const SynthOptions &o, const std::vector<std::string> &args,
             std::ostream &out) {
  const auto start = Clock::now();
  RunManifest manifest;
  manifest.command = "synth";
  manifest.argv = args;
  SyntheticConfig config;
  if (!o.config.empty()) {
    RequireFile(o.config, "config file");
    config = LoadSyntheticConfig(o.config);
    manifest.AddInput(o.config);
  }
  if (o.rho) config.contextual_fraction = *o.rho;
  if (o.noise) config.detection_noise = *o.noise;
  if (o.seed) config.seed = *o.seed;
  if (o.train_videos) config.train_videos = *o.train_videos;
  if (o.dev_videos) config.dev_videos = *o.dev_videos;
  if (o.test_videos) config.test_videos = *o.test_videos;
  if (o.rules) config.rules = *o.rules;

  const Dataset data = Generate(config);
  SaveDataset(o.out, data);
  for (const auto &[split, s] : Describe(data).splits) {
    out << SplitName(split) << ": " << s.videos << " videos, " << s.pairs
        << " pairs, " << s.positives << " positives\n";
  }

  std::istringstream snapshot(FormatSyntheticConfig(config));
  for (const auto &[k, v] : ReadKeyValues(snapshot, "config")) {
    manifest.config[k] = ConfigValue(v);
  }
  manifest.seed = config.seed;
  const fs::path manifest_path =
      o.manifest.empty() ? WithSuffix(o.out, ".manifest.json") : fs::path(o.manifest);
  manifest.outputs = {o.out, manifest_path.string()};
  manifest.wall_clock_seconds = Seconds(start);
  manifest.Save(manifest_path);
  return kExitOk;
}

// stats ----------------------------------------------------------------------

struct StatsOptions {
  std::string data;
  std::string out;
  std::string manifest;
};

int RunStats(const StatsOptions &o, const std::vector<std::string> &args,
             std::ostream &out) {
  const auto start = Clock::now();
  RequireFile(o.data, "data file");
  const Dataset data = LoadDataset(o.data);
  const DatasetStats stats = ComputeStats(data);

  Json j = Json::object();
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %8s %8s %8s %10s %10s\n", "split",
                "videos", "images", "pairs", "positives", "mean_cands");
  out << line;
  for (const auto &[split, s] : stats.splits) {
    std::snprintf(line, sizeof(line), "%-6s %8zu %8zu %8zu %10zu %10.2f\n",
                  std::string(SplitName(split)).c_str(), s.videos, s.images,
                  s.pairs, s.positives, s.mean_candidates);
    out << line;
    j[std::string(SplitName(split))] = {{"videos", s.videos},
                                        {"images", s.images},
                                        {"pairs", s.pairs},
                                        {"positives", s.positives},
                                        {"mean_candidates", s.mean_candidates}};
  }
  WriteText(o.out, j.dump(2) + "\n");

  RunManifest manifest;
  manifest.command = "stats";
  manifest.argv = args;
  manifest.AddInput(o.data);
  const fs::path manifest_path =
      o.manifest.empty() ? WithSuffix(o.out, ".manifest.json") : fs::path(o.manifest);
  manifest.outputs = {o.out, manifest_path.string()};
  manifest.wall_clock_seconds = Seconds(start);
  manifest.Save(manifest_path);
  return kExitOk;
}

// analyze --------------------------------------------------------------------

struct AnalyzeOptions {
  std::string data;
  std::string out_dir;
  std::string manifest;
};

int RunAnalyze(const AnalyzeOptions &o, const std::vector<std::string> &args,
               std::ostream &out) {
  const auto start = Clock::now();
  RequireFile(o.data, "data file");
  const Dataset data = LoadDataset(o.data);
  const AnalysisReport report = Analyze(data);

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> files = {
      {"with_context.csv", report.histograms.with_context.ToCsv()},
      {"without_context.csv", report.histograms.without_context.ToCsv()},
      {"difference.csv", report.histograms.difference.ToCsv()},
      {"analysis.jsonl", FormatAnalysisJsonl(report)},
      {"analysis.txt", FormatAnalysisText(report)},
  };
  RunManifest manifest;
  manifest.command = "analyze";
  manifest.argv = args;
  manifest.AddInput(o.data);
  for (const auto &[name, text] : files) {
    WriteText(dir / name, text);
    manifest.outputs.push_back((dir / name).string());
  }
  out << FormatAnalysisText(report);

  const fs::path manifest_path =
      o.manifest.empty() ? dir / "manifest.json" : fs::path(o.manifest);
  manifest.outputs.push_back(manifest_path.string());
  manifest.wall_clock_seconds = Seconds(start);
  manifest.Save(manifest_path);
  return kExitOk;
}

// train ----------------------------------------------------------------------

struct TrainOptions {
  std::string data;
  std::string variant = "vcc";
  std::uint64_t seed = 0;
  double lr = 1e-4;
  int epochs = 10;
  std::size_t hidden = kDefaultHidden;
  std::size_t width = 32;
  std::size_t m = kDefaultObjects;
  std::string embeddings;
  std::string config;
  std::string out;
  std::string log;
  std::string manifest;
  int jobs = 1;
  std::map<std::string, CLI::Option *> flags;
};

// Fills options that were not given on the command line from the config
// file.
void ApplyTrainConfig(TrainOptions &o) {
  std::ifstream in(o.config);
  if (!in) throw LookupError("config file not found: " + o.config);
  for (const auto &[key, value] : ReadKeyValues(in, o.config)) {
    auto it = o.flags.find(key);
    if (it == o.flags.end()) {
      throw ConfigError(o.config + ": unknown key '" + key + "'");
    }
    if (it->second->count() > 0) continue;
    try {
      if (key == "variant") o.variant = value;
      else if (key == "seed") o.seed = std::stoull(value);
      else if (key == "lr") o.lr = std::stod(value);
      else if (key == "epochs") o.epochs = std::stoi(value);
      else if (key == "hidden") o.hidden = std::stoul(value);
      else if (key == "width") o.width = std::stoul(value);
      else if (key == "m") o.m = std::stoul(value);
      else if (key == "embeddings") o.embeddings = value;
      else if (key == "jobs") o.jobs = std::stoi(value);
    } catch (const std::logic_error &) {
      throw ConfigError(o.config + ": bad value '" + value + "' for " + key);
    }
  }
}

int RunTrain(TrainOptions &o, const std::vector<std::string> &args,
             std::ostream &out) {
  const auto start = Clock::now();
  RunManifest manifest;
  manifest.command = "train";
  manifest.argv = args;
  if (!o.config.empty()) {
    ApplyTrainConfig(o);
    manifest.AddInput(o.config);
  }
  RequireFile(o.data, "data file");
  manifest.AddInput(o.data);

  TrainConfig config;
  config.variant = ParseVariant(o.variant);
  config.seed = o.seed;
  config.learning_rate = o.lr;
  config.max_epochs = o.epochs;
  config.hidden = o.hidden;
  config.width = o.width;
  config.max_objects = o.m;
  config.jobs = o.jobs;

  std::optional<EmbeddingTable> pretrained;
  if (!o.embeddings.empty()) {
    RequireFile(o.embeddings, "embedding file");
    pretrained = LoadEmbeddingFile(o.embeddings);
    config.width = pretrained->width();
    manifest.AddInput(o.embeddings);
  }

  const Dataset data = LoadDataset(o.data);
  const FitResult fit = Fit(config, data, data, std::move(pretrained));
  SaveCheckpoint(o.out, fit.best);
  const fs::path log_path = o.log.empty() ? WithSuffix(o.out, ".log.jsonl") : fs::path(o.log);
  WriteText(log_path, FormatTrainingLog(fit.log));

  const EpochLog &best = fit.log.at(static_cast<std::size_t>(fit.best_epoch - 1));
  char line[160];
  std::snprintf(line, sizeof(line),
                "best epoch %d: dev R@1 %.4f R@5 %.4f R@10 %.4f\n",
                fit.best_epoch, best.dev_r1, best.dev_r5, best.dev_r10);
  out << line;

  manifest.config = {{"variant", std::string(VariantName(config.variant))},
                     {"lr", config.learning_rate},
                     {"epochs", config.max_epochs},
                     {"hidden", config.hidden},
                     {"width", config.width},
                     {"m", config.max_objects},
                     {"embeddings", o.embeddings},
                     {"jobs", config.jobs},
                     {"best_epoch", fit.best_epoch}};
  manifest.seed = config.seed;
  const fs::path manifest_path =
      o.manifest.empty() ? WithSuffix(o.out, ".manifest.json") : fs::path(o.manifest);
  manifest.outputs = {o.out, log_path.string(), manifest_path.string()};
  manifest.wall_clock_seconds = Seconds(start);
  manifest.Save(manifest_path);
  return kExitOk;
}

// eval -----------------------------------------------------------------------

struct EvalOptions {
  std::string data;
  std::string split = "test";
  std::string checkpoint;
  bool random = false;
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string scores;
  std::string export_scores;
  std::string out;
  std::string table;
  std::string manifest;
  int jobs = 1;
};

int RunEval(const EvalOptions &o, const std::vector<std::string> &args,
            std::ostream &out) {
  const auto start = Clock::now();
  const int sources = static_cast<int>(!o.checkpoint.empty()) +
                      static_cast<int>(o.random) +
                      static_cast<int>(!o.scores.empty());
  if (sources != 1) {
    throw ConfigError("give exactly one of --checkpoint, --random, --scores");
  }
  if (!o.export_scores.empty() && !o.scores.empty()) {
    throw ConfigError("--export-scores needs --checkpoint or --random");
  }
  RunManifest manifest;
  manifest.command = "eval";
  manifest.argv = args;
  RequireFile(o.data, "data file");
  manifest.AddInput(o.data);

  const Split split = ParseSplit(o.split);
  const Dataset data = LoadDataset(o.data);
  const std::vector<RankingQuery> queries = BuildQueries(data, split);
  if (queries.empty()) {
    throw ValidationError("split '" + o.split + "' has no positive queries");
  }

  EvalReport report;
  std::vector<std::string> outputs;
  if (!o.checkpoint.empty()) {
    RequireFile(o.checkpoint, "checkpoint");
    manifest.AddInput(o.checkpoint);
    const VccParameters params = LoadCheckpoint(o.checkpoint);
    const Scorer scorer = ModelScorer(params);
    report = Evaluate(scorer, queries, o.jobs);
    if (!o.export_scores.empty()) {
      std::ofstream f(o.export_scores, std::ios::binary);
      if (!f) throw LookupError("cannot write " + o.export_scores);
      WriteScoreFile(f, queries, scorer);
      outputs.push_back(o.export_scores);
    }
  } else if (o.random) {
    if (!o.export_scores.empty()) {
      // A single seeded trial, so the file re-ranks to the same report.
      Rng rng(o.seed);
      const auto scores = RandomScores(queries, rng);
      std::ofstream f(o.export_scores, std::ios::binary);
      if (!f) throw LookupError("cannot write " + o.export_scores);
      WriteScoreFile(f, queries, scores);
      outputs.push_back(o.export_scores);
    }
    report = RandomBaseline(queries, o.seed, o.trials);
  } else {
    RequireFile(o.scores, "score file");
    manifest.AddInput(o.scores);
    report = RankFromScoreFile(fs::path(o.scores), queries);
  }

  const std::string table = FormatReportTable(report);
  out << table;
  WriteText(o.out, FormatReportJsonl(report));
  outputs.insert(outputs.begin(), o.out);
  if (!o.table.empty()) {
    WriteText(o.table, table);
    outputs.push_back(o.table);
  }

  manifest.config = {{"split", o.split},
                     {"checkpoint", o.checkpoint},
                     {"random", o.random},
                     {"trials", o.trials},
                     {"scores", o.scores},
                     {"jobs", o.jobs}};
  manifest.seed = o.seed;
  const fs::path manifest_path =
      o.manifest.empty() ? WithSuffix(o.out, ".manifest.json") : fs::path(o.manifest);
  outputs.push_back(manifest_path.string());
  manifest.outputs = outputs;
  manifest.wall_clock_seconds = Seconds(start);
  manifest.Save(manifest_path);
  return kExitOk;
}

int ExitCodeFor(const std::exception &e) {
  if (dynamic_cast<const ConfigError *>(&e) || dynamic_cast<const LookupError *>(&e)) {
    return kExitUsage;
  }
  if (dynamic_cast<const NumericError *>(&e)) return kExitNumeric;
  if (dynamic_cast<const ParseError *>(&e) || dynamic_cast<const ValidationError *>(&e) ||
      dynamic_cast<const CoverageError *>(&e) || dynamic_cast<const DomainError *>(&e) ||
      dynamic_cast<const DimensionError *>(&e)) {
    return kExitValidation;
  }
  return kExitFailure;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Contextual causality ranking toolkit", "vcc"};
  app.require_subcommand(1);

  SynthOptions synth;
  CLI::App *synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--config", synth.config, "Generator config (key = value)");
  synth_cmd->add_option("--out", synth.out, "Dataset file to write")->required();
  synth_cmd->add_option("--manifest", synth.manifest, "Manifest path");
  synth_cmd->add_option("--rho", synth.rho, "Contextual rule fraction")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--noise", synth.noise, "Detection noise rate")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--train-videos", synth.train_videos);
  synth_cmd->add_option("--dev-videos", synth.dev_videos);
  synth_cmd->add_option("--test-videos", synth.test_videos);
  synth_cmd->add_option("--rules", synth.rules);

  StatsOptions stats;
  CLI::App *stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  stats_cmd->add_option("--data", stats.data, "Dataset file")->required();
  stats_cmd->add_option("--out", stats.out, "JSON statistics to write")->required();
  stats_cmd->add_option("--manifest", stats.manifest, "Manifest path");

  AnalyzeOptions analyze;
  CLI::App *analyze_cmd = app.add_subcommand("analyze", "Annotation analysis");
  analyze_cmd->add_option("--data", analyze.data, "Dataset file")->required();
  analyze_cmd->add_option("--out-dir", analyze.out_dir, "Output directory")->required();
  analyze_cmd->add_option("--manifest", analyze.manifest, "Manifest path");

  TrainOptions train;
  CLI::App *train_cmd = app.add_subcommand("train", "Train a model");
  train.flags["data"] = train_cmd->add_option("--data", train.data, "Dataset file")->required();
  train.flags["variant"] =
      train_cmd->add_option("--variant", train.variant, "Model variant")->capture_default_str()
          ->check(CLI::IsMember({"vcc", "no-context", "no-attention", "feature-context"}));
  train.flags["seed"] = train_cmd->add_option("--seed", train.seed, "Run seed")->capture_default_str();
  train.flags["lr"] = train_cmd->add_option("--lr", train.lr, "SGD learning rate")->capture_default_str();
  train.flags["epochs"] = train_cmd->add_option("--epochs", train.epochs, "Epochs")->capture_default_str();
  train.flags["hidden"] = train_cmd->add_option("--hidden", train.hidden, "Hidden width h")->capture_default_str();
  train.flags["width"] =
      train_cmd->add_option("--width", train.width, "Embedding width d")->capture_default_str();
  train.flags["m"] = train_cmd->add_option("--m", train.m, "Objects per pair")->capture_default_str();
  train.flags["embeddings"] =
      train_cmd->add_option("--embeddings", train.embeddings, "Frozen embedding file");
  train.flags["jobs"] = train_cmd->add_option("--jobs", train.jobs, "Dev evaluation threads")->capture_default_str();
  train_cmd->add_option("--config", train.config, "Option file (key = value)");
  train_cmd->add_option("--out", train.out, "Checkpoint to write")->required();
  train_cmd->add_option("--log", train.log, "Training log (JSONL)");
  train_cmd->add_option("--manifest", train.manifest, "Manifest path");

  EvalOptions eval;
  CLI::App *eval_cmd = app.add_subcommand("eval", "Rank and report Recall@K");
  eval_cmd->add_option("--data", eval.data, "Dataset file")->required();
  eval_cmd->add_option("--split", eval.split, "Split to rank")->capture_default_str()
      ->check(CLI::IsMember({"train", "dev", "test"}));
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Model checkpoint");
  eval_cmd->add_flag("--random", eval.random, "Random baseline");
  eval_cmd->add_option("--trials", eval.trials, "Random baseline trials")->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "Random baseline seed")->capture_default_str();
  eval_cmd->add_option("--scores", eval.scores, "External score file");
  eval_cmd->add_option("--export-scores", eval.export_scores, "Write a score file");
  eval_cmd->add_option("--out", eval.out, "Report to write (JSONL)")->required();
  eval_cmd->add_option("--table", eval.table, "Report table to write");
  eval_cmd->add_option("--manifest", eval.manifest, "Manifest path");
  eval_cmd->add_option("--jobs", eval.jobs, "Scoring threads")->capture_default_str();

  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth_cmd) return RunSynth(synth, args, out);
    if (*stats_cmd) return RunStats(stats, args, out);
    if (*analyze_cmd) return RunAnalyze(analyze, args, out);
    if (*train_cmd) return RunTrain(train, args, out);
    if (*eval_cmd) return RunEval(eval, args, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
  return kExitUsage;
}

}  // namespace vcc::tools
