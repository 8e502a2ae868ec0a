#include "jparse/decoder.h"

#include <sstream>

#include "jparse/oracle.h"
#include "jparse/parser_run.h"
#include "jparse/projectivize.h"
#include "jparse/transition_system.h"

namespace jparse {
namespace {

std::string join(const std::vector<int>& tokens) {
  std::string out = "[";
  for (std::size_t i = 0; i < tokens.size(); ++i) out += (i ? " " : "") + std::to_string(tokens[i]);
  return out + "]";
}

std::string dump(const ParserState& state) {
  std::ostringstream out;
  out << "mode=" << system_mode_name(state.mode)
      << " phase=" << (state.phase == Phase::kSyntactic ? "syntactic" : "semantic")
      << " S=" << join(state.syn_tokens()) << " M=" << join(state.sem_tokens())
      << " B=" << join(state.buffer_tokens()) << " history=";
  for (std::size_t i = 0; i < state.history.size(); ++i) {
    out << (i ? " " : "") << to_string(state.history[i]);
  }
  return out.str();
}

}  // namespace

std::string resolve_sense(const ParserModel& model, const Token& token,
                          const std::optional<std::string>& chosen) {
  return model.resolve_sense(token.lemma, chosen);
}

Decoded decode(const ParserModel& model, const Sentence& input, const DecodeOptions& options) {
  const SystemMode mode = model.hyper().mode;
  ParserState state = initial_state(input, {mode, options.candidates});
  nn::Graph g;
  ParserRun run(model, g, input, state);

  std::optional<Sentence> forced_tree;
  std::optional<OracleTarget> forced;
  if (model.hyper().forced_syntax) {
    if (!options.forced_syntax) throw std::invalid_argument("this model needs a syntactic tree");
    forced_tree = projectivize(*options.forced_syntax).sentence;
    forced.emplace(*forced_tree);
  }

  std::optional<TraceWriter> trace;
  if (options.trace) {
    trace.emplace(*options.trace, input);
    trace->initial(state);
  }

  Decoded out;
  const std::size_t cap = transition_cap(input.size());
  while (!is_terminal(state)) {
    if (out.transitions.size() >= cap) {
      throw DecodeError("transition cap " + std::to_string(cap) + " exceeded: " + dump(state));
    }
    Transition t;
    if (forced && state.phase == Phase::kSyntactic && !state.buffer.empty()) {
      t = forced->next_syntactic(state);
    } else {
      const std::vector<int> actions = run.candidate_actions(state);
      if (actions.empty()) throw DecodeError("no transition is allowed: " + dump(state));
      t = model.actions()[run.best(actions, run.scores(actions))].transition;
    }
    const std::size_t syn_before = state.created_syn_arcs.size();
    const std::size_t sem_before = state.created_sem_arcs.size();
    run.take(state, t);
    if (trace) trace->step(state, t, syn_before, sem_before);
    out.transitions.push_back(std::move(t));
  }

  Sentence parse = extract_parse(state, input);
  if (forced) {
    parse.syn_arcs = options.forced_syntax->syn_arcs;
  } else if (mode != SystemMode::kSemanticsOnly) {
    parse = deprojectivize(parse);
  }
  if (mode != SystemMode::kSyntaxOnly) {
    for (Token& token : parse.tokens) {
      if (options.candidates) token.is_predicate = (*options.candidates)[token.index];
      if (!token.is_predicate) continue;
      std::optional<std::string> chosen;
      if (auto it = state.created_preds.find(token.index); it != state.created_preds.end()) {
        chosen = it->second;
      }
      token.sense = resolve_sense(model, token, chosen);
    }
  }
  parse.normalize();
  out.parse = std::move(parse);
  return out;
}

}  // namespace jparse
