#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/parser_state.h"
#include "jparse/transition.h"

namespace jparse {

// Gold structure in the form the oracle consults at every step.
class OracleTarget {
 public:
  explicit OracleTarget(const Sentence& gold);

  // Next transition consistent with the gold parse, for the state's phase
  // and mode. Falls back to a legal move when the gold parse cannot be
  // followed (non-projective syntax, deep semantic crossings).
  Transition next(const ParserState& state) const;

  // Only the syntactic part of next(); valid in the syntactic phase.
  Transition next_syntactic(const ParserState& state) const;

 private:
  Transition next_semantic(const ParserState& state) const;
  bool has_pending_syn_dependents(const ParserState& state, int token) const;
  bool has_remaining_sem(const ParserState& state, int token) const;
  bool sem_pending_between(const ParserState& state, int a, int b) const;

  std::vector<int> head_;
  std::vector<std::string> label_;
  std::vector<std::vector<int>> children_;
  std::map<std::pair<int, int>, std::string> sem_;  // (predicate, argument) -> role
  std::vector<std::vector<int>> sem_partners_;      // per token, excluding itself
  std::vector<std::string> sense_;                  // "" when no sense
};

struct OracleResult {
  std::vector<Transition> transitions;
  // True when replaying `transitions` recovers the input exactly.
  bool exact = false;
};

// Candidate mask marking the gold predicates, index 0 false.
std::vector<bool> gold_predicate_mask(const Sentence& sentence);

// Encodes a gold parse (projective syntax) as a transition sequence. The
// replay uses the gold predicates as M-Pred candidates.
OracleResult to_transitions(const Sentence& gold, SystemMode mode = SystemMode::kJoint);

// Applies `transitions` from the initial state; throws TransitionError on an
// illegal step.
ParserState replay(const Sentence& sentence, const std::vector<Transition>& transitions,
                   const StateOptions& options = {});

// Compares only what `mode` predicts: syntax for syntax-only, predicates and
// semantic arcs for semantics-only, both for joint.
bool same_parse(const Sentence& a, const Sentence& b, SystemMode mode);

// Generous upper bound on the length of any complete run.
inline std::size_t transition_cap(int num_tokens) {
  return 16 * (static_cast<std::size_t>(num_tokens) + 1);
}

}  // namespace jparse
