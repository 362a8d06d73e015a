// bench/kernels-bench.cc
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

// Serial vs OpenMP versions of the hot kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "lat/lattice-algorithms.h"
#include "parallel/batch-objective.h"
#include "parallel/kernels.h"
#include "toy/lattice-gen.h"
#include "toy/synth-data.h"
#include "toy/training.h"
#include "verify/random-lattice.h"

using namespace latmmi;

namespace {

struct WideLattice {
  Lattice lat;
  ScoreTable scores;
};

const WideLattice &GetWideLattice() {
  static const WideLattice w = [] {
    std::mt19937_64 rng(1);
    RandomLatticeOptions o;
    o.min_frames = 150;
    o.max_frames = 150;
    o.max_states_per_frame = 16;
    o.max_out_arcs = 16;
    o.num_pdfs = 50;
    o.max_paths = 1e300;
    WideLattice out;
    out.lat = RandomLattice(o, rng);
    out.scores = RandomScores(out.lat.NumFrames(), o.num_pdfs, 1.0, rng);
    return out;
  }();
  return w;
}

struct ScorerInput {
  ScorerParams params;
  FeatureMatrix features;
  PdfMatrix grad;
};

const ScorerInput &GetScorerInput() {
  static const ScorerInput s = [] {
    ScorerInput out;
    out.params = ScorerParams::Random(300, 40, 1.0, 2);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    out.features.resize(2000, 40);
    for (Eigen::Index i = 0; i < out.features.size(); ++i) out.features.data()[i] = n(rng);
    out.grad = PdfMatrix(2000, 300, 0.0);
    for (int32 t = 0; t < 2000; ++t)
      for (double &v : out.grad.Row(t)) v = n(rng);
    return out;
  }();
  return s;
}

struct BatchInput {
  ToyTask task;
  ToyDatasets data;
  ScorerParams params;
  std::vector<UtteranceLattices> lattices;
  std::vector<int32> batch;
};

const BatchInput &GetBatchInput() {
  static const BatchInput b = [] {
    BatchInput out;
    SynthConfig c;
    c.num_dev = 2;
    c.num_test = 2;
    c.num_train = 32;
    out.task = MakeToyTask(c);
    out.data = SynthAll(out.task);
    CeConfig ce;
    ce.iterations = 20;
    out.params = CePretrain(out.data.train, out.task.space.NumPdfs(), ce);
    out.lattices = MakeLattices(out.task.space, out.data.train, out.params, 4);
    for (int32 i = 0; i < 32; ++i) out.batch.push_back(i);
    return out;
  }();
  return b;
}

void BM_ForwardSerial(benchmark::State &state) {
  const WideLattice &w = GetWideLattice();
  for (auto _ : state) benchmark::DoNotOptimize(ForwardScores(w.lat, w.scores));
}
void BM_ForwardParallel(benchmark::State &state) {
  const WideLattice &w = GetWideLattice();
  for (auto _ : state) benchmark::DoNotOptimize(ForwardScoresParallel(w.lat, w.scores));
}
void BM_BackwardSerial(benchmark::State &state) {
  const WideLattice &w = GetWideLattice();
  for (auto _ : state) benchmark::DoNotOptimize(BackwardFill(w.lat, w.scores));
}
void BM_BackwardParallel(benchmark::State &state) {
  const WideLattice &w = GetWideLattice();
  for (auto _ : state) benchmark::DoNotOptimize(BackwardFillParallel(w.lat, w.scores));
}
void BM_ScoreFramesSerial(benchmark::State &state) {
  const ScorerInput &s = GetScorerInput();
  for (auto _ : state) benchmark::DoNotOptimize(ScoreFrames(s.params, s.features));
}
void BM_ScoreFramesParallel(benchmark::State &state) {
  const ScorerInput &s = GetScorerInput();
  for (auto _ : state) benchmark::DoNotOptimize(ScoreFramesParallel(s.params, s.features));
}
void BM_ScorerBackwardSerial(benchmark::State &state) {
  const ScorerInput &s = GetScorerInput();
  const ScoreTable sc = ScoreFrames(s.params, s.features);
  for (auto _ : state)
    benchmark::DoNotOptimize(ScorerBackward(s.params, s.features, sc, s.grad));
}
void BM_ScorerBackwardParallel(benchmark::State &state) {
  const ScorerInput &s = GetScorerInput();
  const ScoreTable sc = ScoreFrames(s.params, s.features);
  for (auto _ : state)
    benchmark::DoNotOptimize(ScorerBackwardParallel(s.params, s.features, sc, s.grad));
}

ObjectiveContext BatchContext(const BatchInput &b) {
  ObjectiveContext ctx;
  ctx.space = &b.task.space;
  ctx.utts = &b.data.train;
  ctx.lattices = &b.lattices;
  ctx.check_theorem = false;
  return ctx;
}

void BM_BatchObjectiveSerial(benchmark::State &state) {
  const BatchInput &b = GetBatchInput();
  const ObjectiveContext ctx = BatchContext(b);
  for (auto _ : state)
    benchmark::DoNotOptimize(EvaluateBatchSerial(ctx, b.params, b.batch, 1));
}
void BM_BatchObjectiveParallel(benchmark::State &state) {
  const BatchInput &b = GetBatchInput();
  const ObjectiveContext ctx = BatchContext(b);
  for (auto _ : state)
    benchmark::DoNotOptimize(EvaluateBatchParallel(ctx, b.params, b.batch, 1));
}

}  // namespace

BENCHMARK(BM_ForwardSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BackwardSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BackwardParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreFramesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreFramesParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScorerBackwardSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScorerBackwardParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchObjectiveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchObjectiveParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
