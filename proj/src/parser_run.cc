#include "jparse/parser_run.h"

#include <algorithm>
#include <stdexcept>

namespace jparse {

using nn::Expr;

ParserRun::ParserRun(const ParserModel& model, nn::Graph& g, const Sentence& sentence,
                     ParserState& state, RunOptions options)
    : model_(model),
      g_(g),
      sentence_(sentence),
      options_(std::move(options)),
      actions_(g, model.action_stack_params()) {
  if (!state.history.empty()) throw std::logic_error("ParserRun needs an initial state");
  for (StackId id : {StackId::kSyntactic, StackId::kSemantic, StackId::kBuffer}) {
    if (model.uses_stack(id)) stacks_[static_cast<int>(id)].emplace(g, model.stack_params(id));
  }
  const bool training = options_.rng != nullptr;
  for (Fragment& f : state.buffer) {
    const int token = f.root_token();
    Expr v;
    if (token == kRootToken) {
      v = model.root(g);
    } else {
      const bool unk = training && !options_.unknown_words.empty() && options_.unknown_words[token];
      v = model.atomic(g, sentence.token(token), unk);
    }
    f.vector_id = static_cast<int>(vectors_.size());
    vectors_.push_back(v);
    stacks_[static_cast<int>(StackId::kBuffer)]->push(input(v));
  }
}

Expr ParserRun::input(Expr x) {
  if (options_.rng && options_.dropout > 0) return g_.dropout(x, options_.dropout, *options_.rng);
  return x;
}

std::vector<int> ParserRun::candidate_actions(const ParserState& state) const {
  std::vector<int> out;
  for (TransitionKind kind : allowed(state).to_vector()) {
    if (kind == TransitionKind::kMPred) {
      const int front = state.buffer.back().root_token();
      for (int a : model_.sense_actions(sentence_.token(front).lemma)) out.push_back(a);
    } else if (const auto& ids = model_.actions_of_kind(kind); !ids.empty()) {
      out.insert(out.end(), ids.begin(), ids.end());
    } else {
      // No parameter for this kind was seen in training.
      out.push_back(model_.action_id({kind, kUnknownSymbol}));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Expr ParserRun::scores(const std::vector<int>& actions) {
  std::vector<Expr> queries;
  for (StackId id : {StackId::kSyntactic, StackId::kSemantic, StackId::kBuffer}) {
    if (stacks_[static_cast<int>(id)]) queries.push_back(stacks_[static_cast<int>(id)]->query());
  }
  queries.push_back(actions_.query());
  const Expr y = model_.summarize_state(g_, queries, options_.dropout, options_.rng);
  return model_.score_transitions(g_, y, actions);
}

int ParserRun::best(const std::vector<int>& actions, Expr scores) const {
  const auto& s = g_.value(scores);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (s(i) > s(arg)) arg = i;
  }
  return actions[arg];
}

Expr ParserRun::step_loss(const ParserState& state, const Transition& gold) {
  const std::vector<int> actions = candidate_actions(state);
  const int id = model_.action_id(gold);
  auto it = std::find(actions.begin(), actions.end(), id);
  if (id < 0 || it == actions.end()) {
    throw TransitionError("gold transition " + to_string(gold) + " is not among the allowed actions");
  }
  return g_.pick_neg_log_softmax(scores(actions), static_cast<int>(it - actions.begin()));
}

void ParserRun::take(ParserState& state, const Transition& t) {
  const int id = model_.action_id(t);
  if (id < 0) throw TransitionError("no action for " + to_string(t));
  apply(state, t, this);
  actions_.push(input(model_.action_embedding(g_, id)));
}

int ParserRun::compose(Layer layer, int head_id, int dependent_id, const std::string& label) {
  Expr out;
  switch (layer) {
    case Layer::kSyntactic:
      out = model_.compose_syn(g_, vectors_.at(head_id), vectors_.at(dependent_id), label);
      break;
    case Layer::kSemantic:
      out = model_.compose_sem(g_, vectors_.at(head_id), vectors_.at(dependent_id), label);
      break;
    case Layer::kPredicate:
      out = model_.compose_pred(g_, vectors_.at(head_id), label);
      break;
  }
  vectors_.push_back(out);
  return static_cast<int>(vectors_.size()) - 1;
}

void ParserRun::pushed(StackId stack, const Fragment& fragment) {
  stacks_[static_cast<int>(stack)]->push(input(vectors_.at(fragment.vector_id)));
}

void ParserRun::popped(StackId stack) { stacks_[static_cast<int>(stack)]->pop(); }

}  // namespace jparse
