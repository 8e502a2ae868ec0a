#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "jparse/corpus.h"
#include "jparse/parser_state.h"
#include "jparse/transition.h"

namespace jparse {

class TransitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StackId { kSyntactic, kSemantic, kBuffer };

// Receives every structural change apply() makes, in order, so a model can
// mirror the stacks with its own recurrent summaries. compose() returns the
// vector id for the new fragment; for predicate composition dependent_id is
// -1.
class StateListener {
 public:
  virtual ~StateListener() = default;
  virtual int compose(Layer layer, int head_id, int dependent_id, const std::string& label) = 0;
  virtual void pushed(StackId stack, const Fragment& fragment) = 0;
  virtual void popped(StackId stack) = 0;
};

// Transition kinds legal in `state`, parameters left open. Throws
// TransitionError on a terminal state.
KindSet allowed(const ParserState& state);

// Why `t` may not be applied, or nullopt when it is legal.
std::optional<std::string> violation(const ParserState& state, const Transition& t);

// Applies `t` in place. Throws TransitionError naming the violated
// constraint when `t` is illegal.
void apply(ParserState& state, const Transition& t, StateListener* listener = nullptr);

// The joint parse recorded in `state`, over the tokens of `input`. Tokens
// are marked as predicates when they were disambiguated by M-Pred or head a
// semantic arc; senses come only from M-Pred.
Sentence extract_parse(const ParserState& state, const Sentence& input);

// Writes one line per step in the layout "transition S M B dependency".
class TraceWriter {
 public:
  TraceWriter(std::ostream& out, const Sentence& sentence);
  void initial(const ParserState& state);
  // Call after apply(); `syn_before`/`sem_before` are the created-arc counts
  // before the transition.
  void step(const ParserState& state, const Transition& t, std::size_t syn_before,
            std::size_t sem_before);

 private:
  std::string name(int token) const;
  std::string head_name(const ParserState& state, int token) const;
  std::string row(const ParserState& state) const;

  std::ostream& out_;
  const Sentence& sentence_;
};

}  // namespace jparse
