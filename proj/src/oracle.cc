#include "jparse/oracle.h"

#include <stdexcept>

#include "jparse/transition_system.h"

namespace jparse {
namespace {

using K = TransitionKind;

std::string or_placeholder(const std::string& s) { return s.empty() ? "_" : s; }

bool legal(const ParserState& state, const Transition& t) { return !violation(state, t); }

}  // namespace

OracleTarget::OracleTarget(const Sentence& gold)
    : head_(head_vector(gold)),
      label_(gold.size() + 1),
      children_(gold.size() + 1),
      sem_partners_(gold.size() + 1),
      sense_(gold.size() + 1) {
  for (const SynArc& arc : gold.syn_arcs) {
    label_[arc.dependent] = arc.label;
    children_[arc.head].push_back(arc.dependent);
  }
  for (const SemArc& arc : gold.sem_arcs) {
    sem_[{arc.predicate, arc.argument}] = arc.role;
    if (arc.predicate != arc.argument) {
      sem_partners_[arc.predicate].push_back(arc.argument);
      sem_partners_[arc.argument].push_back(arc.predicate);
    }
  }
  for (const Token& token : gold.tokens) {
    if (token.sense) sense_[token.index] = *token.sense;
  }
}

bool OracleTarget::has_pending_syn_dependents(const ParserState& state, int token) const {
  for (int child : children_[token]) {
    if (!state.has_syn_head(child)) return true;
  }
  return false;
}

bool OracleTarget::sem_pending_between(const ParserState& state, int a, int b) const {
  auto pending = [&](int p, int q) {
    return sem_.count({p, q}) && !state.sem_pairs.count({p, q});
  };
  return pending(a, b) || pending(b, a);
}

bool OracleTarget::has_remaining_sem(const ParserState& state, int token) const {
  // Tokens still in the buffer are exactly those not yet moved to M; they
  // keep sentence order, so they start at the front token.
  int first_unshifted = static_cast<int>(head_.size());
  if (!state.buffer.empty() && state.buffer.back().root_token() != kRootToken) {
    first_unshifted = state.buffer.back().root_token();
  }
  for (int partner : sem_partners_[token]) {
    if (partner >= first_unshifted && sem_pending_between(state, token, partner)) return true;
  }
  return false;
}

Transition OracleTarget::next(const ParserState& state) const {
  switch (state.mode) {
    case SystemMode::kSyntaxOnly:
      return next_syntactic(state);
    case SystemMode::kSemanticsOnly:
      return next_semantic(state);
    case SystemMode::kJoint:
      break;
  }
  if (state.phase == Phase::kSyntactic && !state.buffer.empty()) return next_syntactic(state);
  if (state.phase == Phase::kSemantic && !state.buffer.empty()) return next_semantic(state);
  // Empty buffer: only reductions remain.
  if (!state.syn_stack.empty() && legal(state, {K::kSReduce, ""})) return {K::kSReduce, ""};
  return next_semantic(state);
}

Transition OracleTarget::next_syntactic(const ParserState& state) const {
  const int u = state.syn_stack.empty() ? -1 : state.syn_stack.back().root_token();
  const int v = state.buffer.empty() ? -1 : state.buffer.back().root_token();

  Transition choice{K::kSShift, ""};
  if (v < 0) {
    choice = {K::kSReduce, ""};
  } else if (u > 0 && !state.has_syn_head(u) && head_[u] == v) {
    choice = {K::kSLeft, or_placeholder(label_[u])};
  } else if (u >= 0 && v > 0 && head_[v] == u) {
    choice = {K::kSRight, or_placeholder(label_[v])};
  } else if (u > 0 && state.has_syn_head(u) && !has_pending_syn_dependents(state, u)) {
    choice = {K::kSReduce, ""};
  }
  if (legal(state, choice)) return choice;

  // The gold tree cannot be followed from here; take the first legal move.
  const Transition fallbacks[] = {
      {K::kSLeft, u > 0 ? or_placeholder(label_[u]) : "_"},
      {K::kSReduce, ""},
      {K::kSShift, ""},
      {K::kSRight, v > 0 ? or_placeholder(label_[v]) : "_"},
  };
  for (const Transition& t : fallbacks) {
    if (legal(state, t)) return t;
  }
  throw std::logic_error("oracle found no legal syntactic transition");
}

Transition OracleTarget::next_semantic(const ParserState& state) const {
  const int v = state.buffer.empty() ? -1 : state.buffer.back().root_token();
  const int u = state.sem_stack.empty() ? -1 : state.sem_stack.back().root_token();
  auto gold_role = [&](int p, int a) -> const std::string* {
    auto it = sem_.find({p, a});
    if (it == sem_.end() || state.sem_pairs.count({p, a})) return nullptr;
    return &it->second;
  };

  std::vector<Transition> wanted;
  if (v > 0) {
    if (!sense_[v].empty() && !state.created_preds.count(v)) {
      wanted.push_back({K::kMPred, sense_[v]});
    }
    if (const std::string* role = gold_role(v, v)) wanted.push_back({K::kMSelf, *role});
    if (u > 0) {
      if (const std::string* role = gold_role(v, u)) wanted.push_back({K::kMLeft, *role});
      if (const std::string* role = gold_role(u, v)) wanted.push_back({K::kMRight, *role});
      if (state.sem_stack.size() >= 2) {
        const int w = state.sem_stack[state.sem_stack.size() - 2].root_token();
        if (w > 0 && has_remaining_sem(state, u) && sem_pending_between(state, w, v)) {
          wanted.push_back({K::kMSwap, ""});
        }
      }
    }
  }
  if (u > 0 && !has_remaining_sem(state, u)) wanted.push_back({K::kMReduce, ""});
  wanted.push_back({K::kMShift, ""});
  for (const Transition& t : wanted) {
    if (legal(state, t)) return t;
  }

  for (const Transition& t : {Transition{K::kMReduce, ""}, Transition{K::kMShift, ""},
                              Transition{K::kMSwap, ""}}) {
    if (legal(state, t)) return t;
  }
  throw std::logic_error("oracle found no legal semantic transition");
}

std::vector<bool> gold_predicate_mask(const Sentence& sentence) {
  std::vector<bool> mask(sentence.size() + 1, false);
  for (const Token& token : sentence.tokens) mask[token.index] = token.is_predicate;
  return mask;
}

bool same_parse(const Sentence& a, const Sentence& b, SystemMode mode) {
  if (a.size() != b.size()) return false;
  if (mode != SystemMode::kSemanticsOnly && a.syn_arcs != b.syn_arcs) return false;
  if (mode == SystemMode::kSyntaxOnly) return true;
  if (a.sem_arcs != b.sem_arcs) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a.tokens[i].is_predicate != b.tokens[i].is_predicate) return false;
    if (a.tokens[i].sense != b.tokens[i].sense) return false;
  }
  return true;
}

ParserState replay(const Sentence& sentence, const std::vector<Transition>& transitions,
                   const StateOptions& options) {
  ParserState state = initial_state(sentence, options);
  for (const Transition& t : transitions) apply(state, t);
  return state;
}

OracleResult to_transitions(const Sentence& gold, SystemMode mode) {
  const OracleTarget target(gold);
  ParserState state = initial_state(gold, {mode, gold_predicate_mask(gold)});
  const std::size_t cap = transition_cap(gold.size());
  OracleResult result;
  while (!is_terminal(state)) {
    if (result.transitions.size() >= cap) {
      throw std::logic_error("oracle exceeded the transition cap");
    }
    Transition t = target.next(state);
    apply(state, t);
    result.transitions.push_back(std::move(t));
  }
  result.exact = same_parse(extract_parse(state, gold), gold, mode);
  return result;
}

}  // namespace jparse
