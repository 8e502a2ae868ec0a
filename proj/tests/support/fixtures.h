#pragma once

#include <cstdint>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/model.h"

namespace jparse::testing {

// Small dimensions for gradient checks and fast tests.
Hyperparameters tiny_hyperparameters(SystemMode mode = SystemMode::kJoint);

// Random joint parses of `min_tokens`..`max_tokens` tokens whose oracle
// sequence is exact. Each lemma has one fixed sense.
std::vector<Sentence> synthetic_corpus(int count, int min_tokens, int max_tokens,
                                       std::uint64_t seed);

}  // namespace jparse::testing
