#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/embeddings.h"
#include "jparse/nn/graph.h"
#include "jparse/nn/lstm.h"
#include "jparse/parser_state.h"
#include "jparse/transition.h"
#include "jparse/transition_system.h"
#include "jparse/vocabulary.h"

namespace jparse {

inline const std::string kUnknownSymbol = "<unk>";
inline const std::string kUnknownSense = "<unk-sense>";

struct Hyperparameters {
  SystemMode mode = SystemMode::kJoint;
  // Syntactic transitions come from a given tree and are not scored (the
  // semantic half of the hybrid variant).
  bool forced_syntax = false;
  int word_dim = 32;
  int pos_dim = 12;
  int label_dim = 20;
  int role_dim = 20;
  int sense_dim = 100;
  int action_dim = 100;
  int composition_dim = 100;
  int lstm_hidden = 100;
  int lstm_layers = 2;
  int state_dim = 100;
  int pretrained_dim = 0;  // 0 without pretrained vectors

  std::map<std::string, std::string> to_map() const;
  static Hyperparameters from_map(const std::map<std::string, std::string>& values);
  bool operator==(const Hyperparameters&) const = default;
};

struct Vocabularies {
  Vocabulary words;    // learned word embeddings, <unk> first
  Vocabulary pos;      // <unk> first
  Vocabulary labels;   // syntactic labels, <unk> first
  Vocabulary roles;    // semantic roles, <unk> first
  Vocabulary senses;   // <unk-sense> first
  Vocabulary pretrained;
  // lemma -> senses seen in training, most frequent first.
  std::map<std::string, std::vector<std::string>> lexicon;

  // Symbols from (projectivized) training sentences, sorted for stable ids.
  static Vocabularies from_corpus(const std::vector<Sentence>& corpus,
                                  const EmbeddingTable* pretrained);
};

struct Action {
  Transition transition;
  // Placeholder-parameter actions exist only so forced transitions with
  // unseen labels have an embedding; the scorer never proposes them.
  bool selectable = true;
};

// Every learned tensor of the parser and the functions that combine them.
// Graph-building methods are const: they read parameter values and record
// gradient targets, which is how decoding shares one model across threads.
class ParserModel {
 public:
  ParserModel(const Hyperparameters& hyper, Vocabularies vocab);

  // Fresh model over the corpus symbols; pretrained vectors are copied in
  // and held fixed.
  static ParserModel create(const Hyperparameters& hyper, const std::vector<Sentence>& corpus,
                            const EmbeddingTable* pretrained, std::uint64_t seed);

  const Hyperparameters& hyper() const { return hyper_; }
  const Vocabularies& vocab() const { return vocab_; }
  nn::ParameterSet& params() const { return *params_; }

  const std::vector<Action>& actions() const { return actions_; }
  // Exact action, or the kind's placeholder when the parameter is unseen;
  // -1 when neither exists.
  int action_id(const Transition& t) const;
  // Selectable actions of `kind`, ascending ids.
  const std::vector<int>& actions_of_kind(TransitionKind kind) const;
  // M-Pred actions for a lemma: its training senses, or the unknown sense.
  std::vector<int> sense_actions(const std::string& lemma) const;

  // Sense string for a predicate: the chosen sense when known, else the
  // lemma's most frequent training sense, else "lemma.01".
  std::string resolve_sense(const std::string& lemma,
                            const std::optional<std::string>& chosen) const;

  bool uses_stack(StackId stack) const;
  bool uses_syntax_stack() const { return hyper_.mode != SystemMode::kSemanticsOnly; }
  bool uses_semantic_stack() const { return hyper_.mode != SystemMode::kSyntaxOnly; }

  nn::Expr atomic(nn::Graph& g, const Token& token, bool unknown_word) const;
  nn::Expr root(nn::Graph& g) const;
  nn::Expr compose_syn(nn::Graph& g, nn::Expr head, nn::Expr dependent,
                       const std::string& label) const;
  nn::Expr compose_sem(nn::Graph& g, nn::Expr head, nn::Expr dependent,
                       const std::string& role) const;
  nn::Expr compose_pred(nn::Graph& g, nn::Expr predicate, const std::string& sense) const;
  // y = max(0, d + W[queries]); `queries` in S, M, B, A order over the
  // stacks this mode uses.
  nn::Expr summarize_state(nn::Graph& g, const std::vector<nn::Expr>& queries, double dropout,
                           std::mt19937_64* rng) const;
  nn::Expr score_transitions(nn::Graph& g, nn::Expr y, const std::vector<int>& actions) const;
  nn::Expr action_embedding(nn::Graph& g, int action) const;

  const nn::StackLstmParams& stack_params(StackId stack) const;
  const nn::StackLstmParams& action_stack_params() const { return action_stack_; }

  std::string serialize() const;
  static ParserModel deserialize(const std::string& payload);

 private:
  void declare_parameters();
  void build_actions();

  Hyperparameters hyper_;
  Vocabularies vocab_;
  std::unique_ptr<nn::ParameterSet> params_;
  std::vector<Action> actions_;
  std::map<Transition, int> action_ids_;
  std::vector<std::vector<int>> kind_actions_;
  std::vector<int> placeholder_action_;  // per kind, -1 when absent

  nn::Parameter* pretrained_ = nullptr;
  nn::Parameter* word_ = nullptr;
  nn::Parameter* pos_ = nullptr;
  nn::Parameter* label_ = nullptr;
  nn::Parameter* role_ = nullptr;
  nn::Parameter* sense_ = nullptr;
  nn::Parameter* action_ = nullptr;
  nn::Parameter* token_W_ = nullptr;
  nn::Parameter* token_b_ = nullptr;
  nn::Parameter* root_ = nullptr;
  nn::Parameter* Zs_ = nullptr;
  nn::Parameter* es_ = nullptr;
  nn::Parameter* Zm_ = nullptr;
  nn::Parameter* em_ = nullptr;
  nn::Parameter* Zd_ = nullptr;
  nn::Parameter* ed_ = nullptr;
  nn::Parameter* state_W_ = nullptr;
  nn::Parameter* state_d_ = nullptr;
  nn::Parameter* theta_ = nullptr;
  nn::Parameter* q_ = nullptr;
  nn::StackLstmParams syn_stack_, sem_stack_, buffer_stack_, action_stack_;
};

}  // namespace jparse
