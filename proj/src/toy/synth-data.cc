// src/toy/synth-data.cc
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

#include "toy/synth-data.h"

#include <random>
#include <stdexcept>

#include "base/random.h"
#include "lat/lattice-algorithms.h"

namespace latmmi {

namespace {
enum SeedStream : uint64 {
  kLexiconStream = 1,
  kTopologyStream,
  kLmStream,
  kTemplateStream,
  kTrainStream,
  kDevStream,
  kTestStream,
};
}  // namespace

void SynthConfig::Check() const {
  if (vocab_size < 1 || num_phones < 1 || max_phones_per_word < 1 ||
      max_sentence_len < 1 || frames < 1 || feature_dim < 1)
    throw std::invalid_argument("synth config: sizes must be positive");
  if (noise < 0.0 || template_scale < 0.0 || lm_spread < 0.0)
    throw std::invalid_argument("synth config: scales must be non-negative");
  if (num_train < 0 || num_dev < 0 || num_test < 0)
    throw std::invalid_argument("synth config: dataset sizes must be >= 0");
}

ToyTask MakeToyTask(const SynthConfig &config) {
  config.Check();
  std::mt19937_64 lex_rng(DeriveSeed(config.seed, kLexiconStream));
  Lexicon lexicon = RandomLexicon(config.vocab_size, config.num_phones,
                                  config.max_phones_per_word, lex_rng);
  std::mt19937_64 topo_rng(DeriveSeed(config.seed, kTopologyStream));
  HmmTopology topology = RandomTopology(config.num_phones, topo_rng);

  // Draw LM weights for every sentence up to max length; the space keeps the
  // ones that fit and renormalizes.
  std::map<WordSequence, double> lm;
  {
    std::mt19937_64 rng(DeriveSeed(config.seed, kLmStream));
    std::normal_distribution<double> normal(0.0, config.lm_spread);
    std::vector<WordSequence> frontier{{}};
    for (int32 len = 1; len <= config.max_sentence_len; ++len) {
      std::vector<WordSequence> next;
      for (const auto &prefix : frontier)
        for (WordId w = 1; w <= lexicon.NumWords(); ++w) {
          WordSequence s = prefix;
          s.push_back(w);
          lm[s] = normal(rng);
          next.push_back(std::move(s));
        }
      frontier = std::move(next);
    }
  }

  ToyTask task;
  task.config = config;
  task.space = HypothesisSpace::Build(lexicon, topology, lm, config.frames,
                                      config.max_sentence_len,
                                      config.enumeration_cap);
  std::mt19937_64 rng(DeriveSeed(config.seed, kTemplateStream));
  std::normal_distribution<double> normal(0.0, config.template_scale);
  task.templates.resize(task.space.NumPdfs(), config.feature_dim);
  for (int32 p = 0; p < task.templates.rows(); ++p)
    for (int32 f = 0; f < task.templates.cols(); ++f)
      task.templates(p, f) = normal(rng);
  return task;
}

std::vector<Utterance> SynthDataset(const ToyTask &task, int32 count,
                                    uint64 seed) {
  const HypothesisSpace &space = task.space;
  const int32 T = space.NumFrames();
  const int32 F = task.config.feature_dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<double> lm_probs;
  for (int32 i = 0; i < space.NumSentences(); ++i)
    lm_probs.push_back(std::exp(space.LmLogProb(i)));
  std::discrete_distribution<int32> pick_sentence(lm_probs.begin(),
                                                  lm_probs.end());

  // Zero acoustic scores: sampling then follows the transition weights only.
  const ScoreTable zero(T, space.NumPdfs(), 0.0);
  std::vector<BackwardTable> betas(space.NumSentences());
  std::vector<char> have_beta(space.NumSentences(), 0);

  std::vector<Utterance> out;
  out.reserve(count);
  for (int32 u = 0; u < count; ++u) {
    Utterance utt;
    utt.id = u;
    utt.ref_sentence = pick_sentence(rng);
    utt.ref_words = space.Sentence(utt.ref_sentence);
    const Lattice &graph = space.SentenceGraph(utt.ref_sentence);
    if (!have_beta[utt.ref_sentence]) {
      betas[utt.ref_sentence] = BackwardFill(graph, zero);
      have_beta[utt.ref_sentence] = 1;
    }
    AncestralSampler sampler(graph, zero, betas[utt.ref_sentence]);
    utt.true_alignment = sampler.Sample(rng);
    utt.features.resize(T, F);
    for (int32 t = 0; t < T; ++t) {
      const PdfId pdf = utt.true_alignment.pdfs[t];
      for (int32 f = 0; f < F; ++f)
        utt.features(t, f) =
            task.templates(pdf - 1, f) + task.config.noise * noise(rng);
    }
    out.push_back(std::move(utt));
  }
  return out;
}

ToyDatasets SynthAll(const ToyTask &task) {
  const SynthConfig &c = task.config;
  ToyDatasets d;
  d.train = SynthDataset(task, c.num_train, DeriveSeed(c.seed, kTrainStream));
  d.dev = SynthDataset(task, c.num_dev, DeriveSeed(c.seed, kDevStream));
  d.test = SynthDataset(task, c.num_test, DeriveSeed(c.seed, kTestStream));
  return d;
}

}  // namespace latmmi
