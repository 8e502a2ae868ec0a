#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/model.h"
#include "jparse/transition.h"

namespace jparse {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecodeOptions {
  // Tokens allowed to become predicates; index 0 unused. Absent = all.
  std::optional<std::vector<bool>> candidates;
  // Tree whose syntactic transitions are replayed instead of predicted; used
  // by models trained with forced syntax.
  const Sentence* forced_syntax = nullptr;
  std::ostream* trace = nullptr;
};

struct Decoded {
  Sentence parse;
  std::vector<Transition> transitions;
};

// Greedy decode with one model. Syntax is deprojectivized; every predicate
// gets a sense through resolve_sense. Throws DecodeError if no action is
// available before the end or the run exceeds transition_cap().
Decoded decode(const ParserModel& model, const Sentence& input, const DecodeOptions& options = {});

// Sense for a predicate token whose lemma was never seen in training
// ("lemma.01"), or the model's choice otherwise.
std::string resolve_sense(const ParserModel& model, const Token& token,
                          const std::optional<std::string>& chosen);

}  // namespace jparse
