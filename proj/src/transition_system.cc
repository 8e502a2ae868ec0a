#include "jparse/transition_system.h"

#include <algorithm>
#include <sstream>

namespace jparse {
namespace {

using K = TransitionKind;

std::pair<int, int> unordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::optional<std::string> kind_violation(const ParserState& s, K kind) {
  const bool syntactic = is_syntactic(kind);
  if (s.mode == SystemMode::kSyntaxOnly && !syntactic) {
    return "semantic transitions are disabled in syntax-only mode";
  }
  if (s.mode == SystemMode::kSemanticsOnly && syntactic) {
    return "syntactic transitions are disabled in semantics-only mode";
  }
  if (s.buffer.empty()) {
    if (kind != K::kSReduce && kind != K::kMReduce && kind != K::kMSwap) {
      return "buffer is empty";
    }
  } else if (s.mode == SystemMode::kJoint) {
    if (s.phase == Phase::kSyntactic && !syntactic) {
      return "semantic phase starts only after S-Shift or S-Right";
    }
    if (s.phase == Phase::kSemantic && syntactic) {
      return "syntactic phase resumes only after M-Shift";
    }
  }

  const int front = s.buffer.empty() ? -1 : s.buffer.back().root_token();
  const int syn_top = s.syn_stack.empty() ? -1 : s.syn_stack.back().root_token();
  const int sem_top = s.sem_stack.empty() ? -1 : s.sem_stack.back().root_token();

  switch (kind) {
    case K::kSShift:
      if (front == kRootToken && !s.syn_stack.empty()) {
        return "root may only be shifted onto an empty syntactic stack";
      }
      return std::nullopt;
    case K::kSReduce:
      if (syn_top < 0) return "syntactic stack is empty";
      if (!s.has_syn_head(syn_top)) return "top of the syntactic stack has no head";
      return std::nullopt;
    case K::kSRight:
      if (syn_top < 0) return "syntactic stack is empty";
      if (front == kRootToken) return "root cannot be a dependent";
      if (syn_top == kRootToken) return "root takes dependents only through S-Left";
      if (s.has_syn_head(front)) return "buffer front already has a head";
      return std::nullopt;
    case K::kSLeft:
      if (syn_top < 0) return "syntactic stack is empty";
      if (syn_top == kRootToken) return "root cannot be a dependent";
      if (s.has_syn_head(syn_top)) return "top of the syntactic stack already has a head";
      return std::nullopt;
    case K::kMShift:
      if (front == kRootToken && !s.sem_stack.empty()) {
        return "root may only be shifted onto an empty semantic stack";
      }
      return std::nullopt;
    case K::kMReduce:
      if (sem_top < 0) return "semantic stack is empty";
      if (sem_top == kRootToken) return "root cannot be reduced from the semantic stack";
      return std::nullopt;
    case K::kMRight:
      if (sem_top < 0) return "semantic stack is empty";
      if (sem_top == kRootToken || front == kRootToken) return "root takes no semantic arcs";
      if (!s.predicate_candidates[sem_top]) return "top of the semantic stack cannot be a predicate";
      if (s.sem_pairs.count({sem_top, front})) return "duplicate semantic dependency";
      return std::nullopt;
    case K::kMLeft:
      if (sem_top < 0) return "semantic stack is empty";
      if (sem_top == kRootToken || front == kRootToken) return "root takes no semantic arcs";
      if (!s.predicate_candidates[front]) return "buffer front cannot be a predicate";
      if (s.sem_pairs.count({front, sem_top})) return "duplicate semantic dependency";
      return std::nullopt;
    case K::kMSwap: {
      if (s.sem_stack.size() < 2) return "semantic stack holds fewer than two items";
      const int second = s.sem_stack[s.sem_stack.size() - 2].root_token();
      if (sem_top == kRootToken || second == kRootToken) return "root cannot be swapped";
      if (s.last_swapped == unordered(sem_top, second)) return "repeated M-Swap of the same pair";
      return std::nullopt;
    }
    case K::kMPred:
      if (front == kRootToken) return "root cannot be a predicate";
      if (!s.predicate_candidates[front]) return "buffer front is not a predicate candidate";
      if (s.created_preds.count(front)) return "duplicate predicate";
      return std::nullopt;
    case K::kMSelf:
      if (front == kRootToken) return "root takes no semantic arcs";
      if (!s.predicate_candidates[front]) return "buffer front cannot be a predicate";
      if (s.sem_pairs.count({front, front})) return "duplicate semantic dependency";
      return std::nullopt;
  }
  return "unknown transition kind";
}

Fragment make_composed(Layer layer, const Fragment& head, const Fragment* dependent,
                       const std::string& label, StateListener* listener) {
  auto node = std::make_shared<FragmentTree>();
  node->token = head.root_token();
  node->layer = layer;
  node->label = label;
  node->head = head.tree;
  node->dependent = dependent ? dependent->tree : nullptr;
  const int id = listener ? listener->compose(layer, head.vector_id,
                                              dependent ? dependent->vector_id : -1, label)
                          : -1;
  return Fragment{std::move(node), id};
}

}  // namespace

KindSet allowed(const ParserState& state) {
  if (is_terminal(state)) throw TransitionError("allowed() called on a terminal state");
  KindSet out;
  for (K kind : kAllTransitionKinds) {
    if (!kind_violation(state, kind)) out.insert(kind);
  }
  return out;
}

std::optional<std::string> violation(const ParserState& state, const Transition& t) {
  if (param_slot(t.kind) != ParamSlot::kNone && t.param.empty()) {
    return "missing parameter";
  }
  if (param_slot(t.kind) == ParamSlot::kNone && !t.param.empty()) {
    return "unexpected parameter";
  }
  if (is_terminal(state)) return "state is terminal";
  return kind_violation(state, t.kind);
}

void apply(ParserState& s, const Transition& t, StateListener* listener) {
  if (auto why = violation(s, t)) throw TransitionError(to_string(t) + " is illegal: " + *why);

  auto pushed = [&](StackId id, const Fragment& f) {
    if (listener) listener->pushed(id, f);
  };
  auto popped = [&](StackId id) {
    if (listener) listener->popped(id);
  };
  const bool move = s.mode == SystemMode::kSyntaxOnly;

  switch (t.kind) {
    case K::kSShift: {
      Fragment v = s.buffer.back();
      if (move) {
        s.buffer.pop_back();
        popped(StackId::kBuffer);
      }
      s.syn_stack.push_back(v);
      pushed(StackId::kSyntactic, v);
      if (!move) s.phase = Phase::kSemantic;
      break;
    }
    case K::kSReduce:
      s.syn_stack.pop_back();
      popped(StackId::kSyntactic);
      break;
    case K::kSRight: {
      Fragment u = s.syn_stack.back();
      s.syn_stack.pop_back();
      popped(StackId::kSyntactic);
      Fragment v = s.buffer.back();
      s.created_syn_arcs.push_back({u.root_token(), v.root_token(), t.param});
      s.syn_head[v.root_token()] = u.root_token();
      Fragment composed = make_composed(Layer::kSyntactic, u, &v, t.param, listener);
      s.syn_stack.push_back(composed);
      pushed(StackId::kSyntactic, composed);
      if (move) {
        s.buffer.pop_back();
        popped(StackId::kBuffer);
      }
      s.syn_stack.push_back(v);
      pushed(StackId::kSyntactic, v);
      if (!move) s.phase = Phase::kSemantic;
      break;
    }
    case K::kSLeft: {
      Fragment u = s.syn_stack.back();
      s.syn_stack.pop_back();
      popped(StackId::kSyntactic);
      Fragment v = s.buffer.back();
      s.buffer.pop_back();
      popped(StackId::kBuffer);
      s.created_syn_arcs.push_back({v.root_token(), u.root_token(), t.param});
      s.syn_head[u.root_token()] = v.root_token();
      Fragment composed = make_composed(Layer::kSyntactic, v, &u, t.param, listener);
      s.buffer.push_back(composed);
      pushed(StackId::kBuffer, composed);
      break;
    }
    case K::kMShift: {
      Fragment v = s.buffer.back();
      s.buffer.pop_back();
      popped(StackId::kBuffer);
      s.sem_stack.push_back(v);
      pushed(StackId::kSemantic, v);
      s.phase = Phase::kSyntactic;
      s.last_swapped.reset();
      break;
    }
    case K::kMReduce:
      s.sem_stack.pop_back();
      popped(StackId::kSemantic);
      break;
    case K::kMRight: {
      Fragment u = s.sem_stack.back();
      s.sem_stack.pop_back();
      popped(StackId::kSemantic);
      const Fragment& v = s.buffer.back();
      s.created_sem_arcs.push_back({u.root_token(), v.root_token(), t.param});
      s.sem_pairs.insert({u.root_token(), v.root_token()});
      Fragment composed = make_composed(Layer::kSemantic, u, &v, t.param, listener);
      s.sem_stack.push_back(composed);
      pushed(StackId::kSemantic, composed);
      break;
    }
    case K::kMLeft: {
      const Fragment u = s.sem_stack.back();
      Fragment v = s.buffer.back();
      s.buffer.pop_back();
      popped(StackId::kBuffer);
      s.created_sem_arcs.push_back({v.root_token(), u.root_token(), t.param});
      s.sem_pairs.insert({v.root_token(), u.root_token()});
      Fragment composed = make_composed(Layer::kSemantic, v, &u, t.param, listener);
      s.buffer.push_back(composed);
      pushed(StackId::kBuffer, composed);
      break;
    }
    case K::kMSwap: {
      Fragment top = s.sem_stack.back();
      s.sem_stack.pop_back();
      popped(StackId::kSemantic);
      Fragment second = s.sem_stack.back();
      s.sem_stack.pop_back();
      popped(StackId::kSemantic);
      s.sem_stack.push_back(top);
      pushed(StackId::kSemantic, top);
      s.sem_stack.push_back(second);
      pushed(StackId::kSemantic, second);
      s.last_swapped = unordered(top.root_token(), second.root_token());
      break;
    }
    case K::kMPred: {
      Fragment v = s.buffer.back();
      s.buffer.pop_back();
      popped(StackId::kBuffer);
      s.created_preds[v.root_token()] = t.param;
      Fragment composed = make_composed(Layer::kPredicate, v, nullptr, t.param, listener);
      s.buffer.push_back(composed);
      pushed(StackId::kBuffer, composed);
      break;
    }
    case K::kMSelf: {
      Fragment v = s.buffer.back();
      s.buffer.pop_back();
      popped(StackId::kBuffer);
      s.created_sem_arcs.push_back({v.root_token(), v.root_token(), t.param});
      s.sem_pairs.insert({v.root_token(), v.root_token()});
      Fragment composed = make_composed(Layer::kSemantic, v, &v, t.param, listener);
      s.buffer.push_back(composed);
      pushed(StackId::kBuffer, composed);
      break;
    }
  }
  s.history.push_back(t);
}

Sentence extract_parse(const ParserState& state, const Sentence& input) {
  Sentence out;
  out.tokens = input.tokens;
  for (Token& token : out.tokens) {
    token.is_predicate = false;
    token.sense.reset();
  }
  for (const auto& [token, sense] : state.created_preds) {
    out.tokens.at(token - 1).is_predicate = true;
    out.tokens.at(token - 1).sense = sense;
  }
  for (const SemArc& arc : state.created_sem_arcs) {
    out.tokens.at(arc.predicate - 1).is_predicate = true;
  }
  out.syn_arcs = state.created_syn_arcs;
  out.sem_arcs = state.created_sem_arcs;
  out.normalize();
  return out;
}

TraceWriter::TraceWriter(std::ostream& out, const Sentence& sentence)
    : out_(out), sentence_(sentence) {}

std::string TraceWriter::name(int token) const {
  return token == kRootToken ? "root" : sentence_.token(token).form;
}

std::string TraceWriter::head_name(const ParserState& state, int token) const {
  auto it = state.created_preds.find(token);
  return it == state.created_preds.end() ? name(token) : it->second;
}

std::string TraceWriter::row(const ParserState& state) const {
  auto list = [&](const std::vector<int>& tokens) {
    std::string s = "[";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) s += ", ";
      s += name(tokens[i]);
    }
    return s + "]";
  };
  return list(state.syn_tokens()) + "\t" + list(state.sem_tokens()) + "\t" +
         list(state.buffer_tokens());
}

void TraceWriter::initial(const ParserState& state) {
  out_ << "\t" << row(state) << "\t---\n";
}

void TraceWriter::step(const ParserState& state, const Transition& t, std::size_t syn_before,
                       std::size_t sem_before) {
  std::string dependency = "---";
  if (state.created_syn_arcs.size() > syn_before) {
    const SynArc& a = state.created_syn_arcs.back();
    dependency = t.kind == K::kSLeft
                     ? name(a.dependent) + " <-" + a.label + "- " + name(a.head)
                     : name(a.head) + " -" + a.label + "-> " + name(a.dependent);
  } else if (state.created_sem_arcs.size() > sem_before) {
    const SemArc& a = state.created_sem_arcs.back();
    const std::string head = head_name(state, a.predicate);
    if (t.kind == K::kMLeft) {
      dependency = name(a.argument) + " <-" + a.role + "- " + head;
    } else if (t.kind == K::kMSelf) {
      dependency = head + " <-" + a.role + "-> " + head;
    } else {
      dependency = head + " -" + a.role + "-> " + name(a.argument);
    }
  }
  out_ << to_display_string(t) << "\t" << row(state) << "\t" << dependency << "\n";
}

}  // namespace jparse
