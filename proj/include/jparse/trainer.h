#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/embeddings.h"
#include "jparse/evaluation.h"
#include "jparse/model.h"
#include "jparse/nn/graph.h"
#include "jparse/parser_run.h"
#include "jparse/pipeline.h"
#include "jparse/schedule.h"

namespace jparse {

struct TrainConfig {
  Hyperparameters hyper;
  int max_epochs = 30;
  double learning_rate = 0.1;  // initial rate
  double decay = 0.1;          // rate = initial / (1 + decay * epoch)
  double dropout = 0.2;
  double unknown_prob = 0.5;   // singleton replacement probability
  int patience = 5;            // epochs without dev improvement before stopping
  double clip_norm = 0.0;      // 0 disables clipping
  // Stop as soon as the dev metric reaches this value.
  std::optional<double> target_metric;
  std::uint64_t seed = 1;
};

struct EpochRecord {
  int epoch = 0;
  double learning_rate = 0.0;
  double loss = 0.0;
  std::optional<Metrics> dev;
  std::optional<double> dev_metric;
};

struct TrainResult {
  ParserModel model;
  std::vector<EpochRecord> history;
  int best_epoch = -1;  // -1 without a dev set
};

// Word forms that occur exactly once in `corpus`.
std::set<std::string> singleton_forms(const std::vector<Sentence>& corpus);

// Per-token flags (index 0 unused): each singleton form is marked with
// probability `prob`.
std::vector<bool> unknown_word_mask(const Sentence& sentence, const std::set<std::string>& singletons,
                                    double prob, std::mt19937_64& rng);

// The corpus with singleton forms replaced by the unknown-word symbol with
// probability `prob`.
std::vector<Sentence> singleton_unking(const std::vector<Sentence>& corpus, double prob,
                                       std::uint64_t seed);

// The metric early stopping follows: macro F1 for joint models, LAS for
// syntax-only and semantic F1 for semantics-only or forced-syntax models.
double dev_metric(const Hyperparameters& hyper, const Metrics& metrics);

// Summed step losses of the oracle sequence for one (projective) training
// sentence. Forced syntactic steps are taken without loss. The loss node is
// a 1-vector, or -1 when no step was scored.
nn::Expr sentence_loss(nn::Graph& g, const ParserModel& model, const Sentence& gold,
                       const RunOptions& options);

// Fraction of scored oracle steps on which the model's best action is the
// oracle's, following the oracle's path.
double transition_accuracy(const ParserModel& model, const std::vector<Sentence>& corpus);

// Decodes `gold` with its predicate mask as candidates and, for
// forced-syntax models, its own tree.
std::vector<Sentence> decode_corpus(const ParserModel& model, const std::vector<Sentence>& gold);

// Per-sentence SGD over the oracle sequences of `corpus`. With `dev` the
// model from the best epoch is returned. One JSON record per epoch goes to
// `log`. Non-projective trees are projectivized first.
TrainResult train(const std::vector<Sentence>& corpus, const std::vector<Sentence>* dev,
                  const TrainConfig& config, const EmbeddingTable* pretrained = nullptr,
                  std::ostream* log = nullptr);

// Trains the two stages of the hybrid variant: a syntax-only model, then a
// forced-syntax model on the training semantics paired with the first
// model's predicted trees.
Pipeline train_hybrid(const std::vector<Sentence>& corpus, const std::vector<Sentence>* dev,
                      const TrainConfig& config, const EmbeddingTable* pretrained = nullptr,
                      std::ostream* log = nullptr);

// Trains the parser(s) for `variant`.
Pipeline train_pipeline(Variant variant, const std::vector<Sentence>& corpus,
                        const std::vector<Sentence>* dev, const TrainConfig& config,
                        const EmbeddingTable* pretrained = nullptr, std::ostream* log = nullptr);

}  // namespace jparse
