#pragma once

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "jparse/model.h"
#include "jparse/nn/graph.h"
#include "jparse/nn/lstm.h"
#include "jparse/parser_state.h"
#include "jparse/transition_system.h"

namespace jparse {

struct RunOptions {
  // Dropout and unknown-word replacement apply only when `rng` is set.
  std::mt19937_64* rng = nullptr;
  double dropout = 0.0;
  std::vector<bool> unknown_words;  // per token (index 0 unused); empty = none
};

// One pass of the model over one sentence: owns the stack LSTMs and keeps
// them in step with the ParserState it is attached to.
class ParserRun : public StateListener {
 public:
  // Attaches atomic vectors to the buffer items of `state`, which must be
  // fresh from initial_state().
  ParserRun(const ParserModel& model, nn::Graph& g, const Sentence& sentence, ParserState& state,
            RunOptions options = {});

  // Selectable actions of every allowed kind, ascending.
  std::vector<int> candidate_actions(const ParserState& state) const;
  // Scores of `actions`, in the same order.
  nn::Expr scores(const std::vector<int>& actions);
  // Highest-scoring action; ties go to the earliest (lowest id).
  int best(const std::vector<int>& actions, nn::Expr scores) const;
  // -log p(gold | state) over the candidate actions.
  nn::Expr step_loss(const ParserState& state, const Transition& gold);

  // Applies `t` to `state` and records it on the action stack.
  void take(ParserState& state, const Transition& t);

  int compose(Layer layer, int head_id, int dependent_id, const std::string& label) override;
  void pushed(StackId stack, const Fragment& fragment) override;
  void popped(StackId stack) override;

 private:
  nn::Expr input(nn::Expr x);

  const ParserModel& model_;
  nn::Graph& g_;
  const Sentence& sentence_;
  RunOptions options_;
  std::vector<nn::Expr> vectors_;
  std::array<std::optional<nn::StackLstm>, 3> stacks_;  // indexed by StackId
  nn::StackLstm actions_;
};

}  // namespace jparse
