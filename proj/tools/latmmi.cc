// tools/latmmi.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// latmmi: command-line driver for data generation, lattice generation,
// sequence training, lattice inspection and verification.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "base/text-utils.h"
#include "io/config.h"
#include "io/data-io.h"
#include "io/metrics-io.h"
#include "io/pipeline.h"
#include "json.hpp"
#include "lat/lattice-algorithms.h"
#include "lat/lattice-io.h"
#include "verify/suites.h"

namespace fs = std::filesystem;
using namespace latmmi;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<uint64> seed;
  std::string out_dir = "latmmi-out";
};

void AddCommon(CLI::App *cmd, CommonArgs *args) {
  cmd->add_option("--config", args->config_path, "INI configuration file");
  cmd->add_option("--seed", args->seed, "master seed; replaces every seed of the config");
  cmd->add_option("--out-dir", args->out_dir, "experiment directory")->capture_default_str();
}

// Explicit --config wins; otherwise the config gen-data stored in the
// experiment directory; otherwise the built-in defaults.
ExperimentConfig LoadConfig(const CommonArgs &args) {
  ExperimentConfig config;
  const std::string stored = args.out_dir + "/config.ini";
  if (!args.config_path.empty())
    config = ReadConfigFile(args.config_path);
  else if (fs::exists(stored))
    config = ReadConfigFile(stored);
  if (args.seed) config.OverrideSeed(*args.seed);
  config.Check();
  return config;
}

std::string LatticeDir(const CommonArgs &args) { return args.out_dir + "/lattices"; }

int CmdGenData(const CommonArgs &args) {
  const ExperimentConfig config = LoadConfig(args);
  const ToyTask task = MakeToyTask(config.synth);
  const ToyDatasets data = SynthAll(task);
  fs::create_directories(args.out_dir);
  WriteFileAtomically(args.out_dir + "/config.ini", ConfigToString(config));
  WriteDatasetFile(data.train, args.out_dir + "/train.data");
  WriteDatasetFile(data.dev, args.out_dir + "/dev.data");
  WriteDatasetFile(data.test, args.out_dir + "/test.data");
  std::printf("sentences %d  full-graph paths %.0f  pdfs %d\n",
              task.space.NumSentences(), task.space.FullGraphPathCount(),
              task.space.NumPdfs());
  std::printf("train %zu  dev %zu  test %zu utterances -> %s\n", data.train.size(),
              data.dev.size(), data.test.size(), args.out_dir.c_str());
  return 0;
}

int CmdCePretrain(const CommonArgs &args, std::string model_path) {
  const ExperimentConfig config = LoadConfig(args);
  const ToyTask task = MakeToyTask(config.synth);
  const auto train = ReadDatasetFile(args.out_dir + "/train.data", task.space);
  const ScorerParams params = CePretrain(train, task.space.NumPdfs(), config.ce);
  if (model_path.empty()) model_path = args.out_dir + "/ce.model";
  WriteScorerFile(params, model_path);
  std::printf("frame cross-entropy %s  frame accuracy %s -> %s\n",
              FormatScore(FrameCrossEntropy(params, train)).c_str(),
              FormatScore(FrameAccuracy(params, train)).c_str(), model_path.c_str());
  return 0;
}

int CmdMakeLattices(const CommonArgs &args, std::string ce_model) {
  const ExperimentConfig config = LoadConfig(args);
  const ToyTask task = MakeToyTask(config.synth);
  const auto train = ReadDatasetFile(args.out_dir + "/train.data", task.space);
  if (ce_model.empty()) ce_model = args.out_dir + "/ce.model";
  if (!fs::exists(ce_model)) throw std::runtime_error("CE model not found: " + ce_model);
  const ScorerParams ce = ReadScorerFile(ce_model);
  const auto lattices = MakeLattices(task.space, train, ce, config.train.K);
  const std::string dir = LatticeDir(args);
  fs::create_directories(dir);
  for (size_t i = 0; i < lattices.size(); ++i)
    WriteUtteranceLattices(dir, static_cast<int32>(i), lattices[i]);
  const LatticeSizeSummary s = SummarizeLattices(lattices);
  nlohmann::ordered_json j;
  j["utterances"] = s.utterances;
  j["K"] = config.train.K;
  j["raw_arcs"] = s.raw_arcs;
  j["det_arcs"] = s.det_arcs;
  j["raw_paths"] = s.raw_paths;
  j["det_paths"] = s.det_paths;
  j["arc_ratio"] = s.ArcRatio();
  j["path_ratio"] = s.PathRatio();
  WriteFileAtomically(dir + "/summary.json", j.dump(2) + "\n");
  std::printf("%d utterances, K=%d -> %s\n", s.utterances, config.train.K, dir.c_str());
  std::printf("raw/det size ratio: arcs %s (%lld / %lld), paths %s\n",
              FormatScore(s.ArcRatio()).c_str(), static_cast<long long>(s.raw_arcs),
              static_cast<long long>(s.det_arcs), FormatScore(s.PathRatio()).c_str());
  return 0;
}

int CmdTrain(const CommonArgs &args, const std::string &mode,
             const std::string &numerator, std::optional<int32> iterations) {
  ExperimentConfig config = LoadConfig(args);
  if (!mode.empty()) config.train.mode = ParseDenominatorMode(mode);
  if (!numerator.empty()) config.train.numerator = ParseNumeratorMode(numerator);
  if (iterations) config.train.iterations = *iterations;
  config.Check();
  const ToyTask task = MakeToyTask(config.synth);
  const auto train = ReadDatasetFile(args.out_dir + "/train.data", task.space);
  const auto dev = ReadDatasetFile(args.out_dir + "/dev.data", task.space);
  const ScorerParams ce = ReadScorerFile(args.out_dir + "/ce.model");
  std::vector<UtteranceLattices> lattices;
  for (size_t i = 0; i < train.size(); ++i)
    lattices.push_back(ReadUtteranceLattices(LatticeDir(args), static_cast<int32>(i)));

  const std::string run = std::string(DenominatorModeName(config.train.mode)) + "-" +
                          NumeratorModeName(config.train.numerator);
  const std::string dir = args.out_dir + "/train-" + run;
  fs::create_directories(dir);
  MetricsWriter writer(dir + "/metrics.jsonl");
  int32 violations = 0;
  TrainResult result;
  try {
    result = Train(task.space, train, lattices, dev, ce, config.train,
                   [&](const MetricsRecord &r) {
                     writer.Write(r);
                     if (!r.theorem_ok) {
                       if (violations++ == 0)
                         std::fprintf(stderr,
                                      "theorem check failed at iteration %d: group-bound %s "
                                      "reference-bound %s normalization %s muhat gap %s\n",
                                      r.iteration, FormatScore(r.group_bound_min_residual).c_str(),
                                      FormatScore(r.reference_bound_residual).c_str(),
                                      FormatScore(r.normalization_residual).c_str(),
                                      FormatScore(r.muhat_loss_gap).c_str());
                     }
                   });
  } catch (const std::runtime_error &e) {
    std::fprintf(stderr, "training aborted: %s (metrics so far in %s)\n", e.what(),
                 (dir + "/metrics.jsonl").c_str());
    return 2;
  }
  WriteScorerFile(result.selected_params, dir + "/model");
  WriteScorerFile(result.final_params, dir + "/final.model");
  const MetricsRecord *last = result.metrics.empty() ? nullptr : &result.metrics.back();
  std::printf("%s: %zu iterations, selected iteration %d", run.c_str(),
              result.metrics.size(), result.selected_iteration);
  if (last)
    std::printf(", last true loss %s, held-out sentence error %s",
                FormatScore(last->loss_true).c_str(),
                FormatScore(last->heldout_sentence_error).c_str());
  std::printf(" -> %s\n", dir.c_str());
  if (violations > 0) {
    std::fprintf(stderr, "theorem checks failed in %d iterations\n", violations);
    return 3;
  }
  return 0;
}

int CmdEvaluate(const CommonArgs &args, const std::string &model, const std::string &set) {
  const ExperimentConfig config = LoadConfig(args);
  const ToyTask task = MakeToyTask(config.synth);
  const auto utts = ReadDatasetFile(args.out_dir + "/" + set + ".data", task.space);
  const ScorerParams params = ReadScorerFile(model);
  const DecodeSummary d = DecodeSetParallel(task.space, params, utts);
  std::printf("%s: %zu utterances, sentence error %s, mean true MMI loss %s\n",
              set.c_str(), utts.size(), FormatScore(d.sentence_error).c_str(),
              FormatScore(d.mean_true_loss).c_str());
  return 0;
}

struct LatticeArgs {
  std::string in, scores, out;
  uint64 seed = 0;
  double max_paths = 1e6;
};

ScoreTable LoadScores(const LatticeArgs &a, const Lattice &lat) {
  if (!a.scores.empty()) return ReadScoreTableFile(a.scores);
  return ScoreTable(lat.NumFrames(), std::max<int32>(1, lat.MaxPdf()), 0.0);
}

int CmdLattice(const std::string &sub, const LatticeArgs &a) {
  if (sub == "validate") {
    try {
      const Lattice lat = ReadLatticeFile(a.in);
      std::printf("valid: %d frames, %d states, %d arcs, %.0f paths\n", lat.NumFrames(),
                  lat.NumStates(), lat.NumArcs(), CountPaths(lat));
      return 0;
    } catch (const std::exception &e) {
      std::printf("invalid: %s\n", e.what());
      return 1;
    }
  }
  const Lattice lat = ReadLatticeFile(a.in);
  const ScoreTable scores = LoadScores(a, lat);
  if (sub == "forward") {
    std::printf("%s\n", FormatScore(ForwardLogSum(lat, scores)).c_str());
  } else if (sub == "viterbi") {
    const ScoredPath best = ViterbiBestPath(lat, scores);
    std::printf("%s\n", FormatPathLine(best.path, best.score).c_str());
  } else if (sub == "determinize") {
    const Lattice det = DeterminizeBestAlignment(lat, scores);
    if (a.out.empty())
      std::cout << LatticeToString(det);
    else
      WriteLatticeFile(det, a.out);
  } else if (sub == "sample") {
    const BackwardTable beta = BackwardFill(lat, scores);
    const Path p = AncestralSample(lat, scores, beta, a.seed);
    std::printf("%s\n", FormatPathLine(p, PathScore(p, scores)).c_str());
  } else if (sub == "enumerate") {
    for (const ScoredPath &p : EnumeratePaths(lat, scores, a.max_paths))
      std::printf("%s\n", FormatPathLine(p.path, p.score).c_str());
  } else {
    throw std::invalid_argument("unknown lattice subcommand " + sub);
  }
  return 0;
}

int CmdVerify(const CommonArgs &args, const std::string &suite, bool corrupt,
              const std::string &json_path, std::optional<int32> theorem_iterations,
              std::optional<int32> experiment_seeds) {
  SuiteOptions opts;
  if (!args.config_path.empty()) opts.config = ReadConfigFile(args.config_path);
  if (args.seed) opts.seed = *args.seed;
  opts.corrupt = corrupt;
  if (theorem_iterations) opts.theorem_iterations = *theorem_iterations;
  if (experiment_seeds) opts.experiment_seeds = *experiment_seeds;
  std::vector<CriterionResult> results;
  const std::vector<std::string> suites =
      suite == "all" ? std::vector<std::string>{"oracle", "gradient", "theorem", "experiments"}
                     : std::vector<std::string>{suite};
  for (const std::string &s : suites) {
    for (CriterionResult &r : RunSuite(s, opts)) {
      std::printf("%s\n", FormatCriterionLine(r).c_str());
      std::fflush(stdout);
      results.push_back(std::move(r));
    }
  }
  const std::string report = SuiteReportJson(suite, results);
  if (json_path.empty())
    std::printf("%s\n", report.c_str());
  else
    WriteFileAtomically(json_path, report + "\n");
  for (const CriterionResult &r : results)
    if (!r.passed) return 1;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Lattice-based MMI sequence training on synthetic toy tasks"};
  app.require_subcommand(1);

  CommonArgs common;

  auto *gen = app.add_subcommand("gen-data", "synthesize train/dev/test sets");
  AddCommon(gen, &common);

  std::string ce_out;
  auto *ce = app.add_subcommand("ce-pretrain", "frame-level cross-entropy training");
  AddCommon(ce, &common);
  ce->add_option("--model-out", ce_out, "output model (default <out-dir>/ce.model)");

  std::string ce_model;
  auto *mk = app.add_subcommand("make-lattices", "recognition pass with the CE model");
  AddCommon(mk, &common);
  mk->add_option("--ce-model", ce_model, "CE model (default <out-dir>/ce.model)");

  std::string mode, numerator;
  std::optional<int32> iterations;
  auto *tr = app.add_subcommand("train", "MMI sequence training");
  AddCommon(tr, &common);
  tr->add_option("--mode", mode, "denominator: baseline or otf")
      ->check(CLI::IsMember({"baseline", "otf"}));
  tr->add_option("--numerator", numerator, "numerator: fixed, viterbi or ancestral")
      ->check(CLI::IsMember({"fixed", "viterbi", "ancestral"}));
  tr->add_option("--iterations", iterations, "override [train] iterations");

  std::string eval_model, eval_set = "test";
  auto *ev = app.add_subcommand("evaluate", "sentence error of a model on a data set");
  AddCommon(ev, &common);
  ev->add_option("--model", eval_model, "scorer model file")->required();
  ev->add_option("--set", eval_set, "train, dev or test")
      ->check(CLI::IsMember({"train", "dev", "test"}))
      ->capture_default_str();

  LatticeArgs lat_args;
  auto *lat = app.add_subcommand("lattice", "lattice algorithms on a lattice file");
  lat->require_subcommand(1);
  std::string lat_sub;
  for (const char *name : {"forward", "viterbi", "determinize", "sample", "enumerate",
                           "validate"}) {
    auto *sub = lat->add_subcommand(name);
    sub->add_option("--in", lat_args.in, "lattice file")->required();
    sub->add_option("--scores", lat_args.scores, "score table (default: all zero)");
    sub->add_option("--seed", lat_args.seed, "sampling seed");
    sub->add_option("--out", lat_args.out, "output lattice (determinize)");
    sub->add_option("--max-paths", lat_args.max_paths, "enumeration cap");
    sub->callback([&lat_sub, name] { lat_sub = name; });
  }

  std::string suite = "oracle", json_path;
  bool corrupt = false;
  std::optional<int32> theorem_iterations, experiment_seeds;
  auto *ver = app.add_subcommand("verify", "run acceptance suites");
  AddCommon(ver, &common);
  ver->add_option("--suite", suite, "oracle, gradient, theorem, experiments or all")
      ->check(CLI::IsMember({"oracle", "gradient", "theorem", "experiments", "all"}))
      ->capture_default_str();
  ver->add_flag("--corrupt", corrupt, "inject a seeded corruption into every check");
  ver->add_option("--json", json_path, "write the summary here instead of stdout");
  ver->add_option("--theorem-iterations", theorem_iterations, "training iterations of the theorem run");
  ver->add_option("--experiment-seeds", experiment_seeds, "seeds of the training grid");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return CmdGenData(common);
    if (ce->parsed()) return CmdCePretrain(common, ce_out);
    if (mk->parsed()) return CmdMakeLattices(common, ce_model);
    if (tr->parsed()) return CmdTrain(common, mode, numerator, iterations);
    if (ev->parsed()) return CmdEvaluate(common, eval_model, eval_set);
    if (lat->parsed()) return CmdLattice(lat_sub, lat_args);
    if (ver->parsed())
      return CmdVerify(common, suite, corrupt, json_path, theorem_iterations,
                       experiment_seeds);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
