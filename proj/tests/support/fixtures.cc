#include "support/fixtures.h"

#include <random>

#include "jparse/oracle.h"
#include "support/random_parse.h"

namespace jparse::testing {

Hyperparameters tiny_hyperparameters(SystemMode mode) {
  Hyperparameters h;
  h.mode = mode;
  h.word_dim = 3;
  h.pos_dim = 2;
  h.label_dim = 2;
  h.role_dim = 2;
  h.sense_dim = 2;
  h.action_dim = 3;
  h.composition_dim = 4;
  h.lstm_hidden = 3;
  h.lstm_layers = 2;
  h.state_dim = 4;
  return h;
}

std::vector<Sentence> synthetic_corpus(int count, int min_tokens, int max_tokens,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomParseOptions options;
  options.min_tokens = min_tokens;
  options.max_tokens = max_tokens;
  std::vector<Sentence> out;
  while (static_cast<int>(out.size()) < count) {
    Sentence s = random_parse(options, rng);
    for (Token& t : s.tokens) {
      if (t.is_predicate) t.sense = t.lemma + (t.lemma.size() % 2 ? ".01" : ".02");
    }
    if (to_transitions(s).exact) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace jparse::testing
