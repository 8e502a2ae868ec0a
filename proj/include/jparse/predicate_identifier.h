#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/nn/graph.h"
#include "jparse/nn/lstm.h"
#include "jparse/vocabulary.h"

namespace jparse {

struct PidHyperparameters {
  int lemma_dim = 32;
  int pos_dim = 12;
  int hidden_dim = 100;
  double threshold = 0.5;  // a token is a predicate when p > threshold

  bool operator==(const PidHyperparameters&) const = default;
};

// Per-token predicate classifier: forward and backward LSTMs over lemma and
// POS embeddings, then an independent logistic decision for every token.
class PredicateIdentifier {
 public:
  PredicateIdentifier(const PidHyperparameters& hyper, Vocabulary lemmas, Vocabulary pos);

  // Vocabularies from `corpus`, parameters drawn from `seed`.
  static PredicateIdentifier create(const PidHyperparameters& hyper,
                                    const std::vector<Sentence>& corpus, std::uint64_t seed);

  const PidHyperparameters& hyper() const { return hyper_; }
  const Vocabulary& lemmas() const { return lemmas_; }
  const Vocabulary& pos() const { return pos_; }
  nn::ParameterSet& params() const { return *params_; }

  // One logit (1-vector) per token, in token order.
  std::vector<nn::Expr> logits(nn::Graph& g, const Sentence& sentence) const;
  // Sum over tokens of the binary log-loss against the gold predicate flags.
  nn::Expr loss(nn::Graph& g, const Sentence& sentence) const;

  std::vector<double> probabilities(const Sentence& sentence) const;
  // Candidate mask, index 0 (root) false.
  std::vector<bool> identify(const Sentence& sentence) const;

  std::string serialize() const;
  static PredicateIdentifier deserialize(const std::string& payload);

 private:
  void declare_parameters();

  PidHyperparameters hyper_;
  Vocabulary lemmas_;  // <unk> first
  Vocabulary pos_;     // <unk> first
  std::unique_ptr<nn::ParameterSet> params_;
  nn::Parameter* lemma_ = nullptr;
  nn::Parameter* tag_ = nullptr;
  nn::LstmLayer forward_;
  nn::LstmLayer backward_;
  nn::Parameter* out_w_ = nullptr;
  nn::Parameter* out_b_ = nullptr;
};

struct PidTrainConfig {
  PidHyperparameters hyper;
  int max_epochs = 20;
  double learning_rate = 0.1;
  double decay = 0.1;
  int patience = 5;
  double clip_norm = 0.0;
  std::uint64_t seed = 1;
};

struct PidScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;  // per token
};

PidScores score_predicates(const PredicateIdentifier& pid, const std::vector<Sentence>& gold);

// Per-sentence SGD with the trainer's learning-rate schedule. With a dev set
// the best epoch by dev F1 is kept and training stops after `patience`
// epochs without improvement. Writes one JSON record per epoch to `log`.
PredicateIdentifier train_pid(const std::vector<Sentence>& corpus,
                              const std::vector<Sentence>* dev, const PidTrainConfig& config,
                              std::ostream* log = nullptr);

}  // namespace jparse
