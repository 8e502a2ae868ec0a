#pragma once

#include <span>

#include "jparse/corpus.h"

namespace jparse {

struct Metrics {
  double las = 0.0;
  double sem_precision = 0.0;
  double sem_recall = 0.0;
  double sem_f1 = 0.0;
  double macro_f1 = 0.0;  // arithmetic mean of las and sem_f1
};

// Semantic items are the labeled (predicate, argument, role) arcs plus one
// item per predicate sense, pooled into a single precision/recall count.
// This approximates the official CoNLL scorer; it is not a reimplementation
// of it. Empty item sets on both sides score 1.0.
Metrics evaluate(std::span<const Sentence> gold, std::span<const Sentence> predicted);

}  // namespace jparse
