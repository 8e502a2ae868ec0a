#include "jparse/evaluation.h"

#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace jparse {
namespace {

using SemItem = std::tuple<int, int, std::string>;

// Sense items use argument index -1 so they never collide with arcs.
std::set<SemItem> semantic_items(const Sentence& s) {
  std::set<SemItem> items;
  for (const SemArc& arc : s.sem_arcs) items.emplace(arc.predicate, arc.argument, arc.role);
  for (const Token& t : s.tokens) {
    if (t.is_predicate) items.emplace(t.index, -1, t.sense.value_or(""));
  }
  return items;
}

double ratio(std::size_t numerator, std::size_t denominator, std::size_t other_side) {
  if (denominator == 0) return other_side == 0 ? 1.0 : 0.0;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

Metrics evaluate(std::span<const Sentence> gold, std::span<const Sentence> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("sentence count mismatch: " + std::to_string(gold.size()) +
                                " gold vs " + std::to_string(predicted.size()) + " predicted");
  }
  std::size_t tokens = 0, attached = 0;
  std::size_t gold_items = 0, predicted_items = 0, correct_items = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Sentence& g = gold[i];
    const Sentence& p = predicted[i];
    if (g.size() != p.size()) {
      throw std::invalid_argument("token count mismatch in sentence " + std::to_string(i + 1));
    }
    tokens += g.size();
    std::set<std::tuple<int, int, std::string>> predicted_arcs;
    for (const SynArc& arc : p.syn_arcs) predicted_arcs.emplace(arc.dependent, arc.head, arc.label);
    for (const SynArc& arc : g.syn_arcs) {
      if (predicted_arcs.count({arc.dependent, arc.head, arc.label})) ++attached;
    }

    const auto gi = semantic_items(g);
    const auto pi = semantic_items(p);
    gold_items += gi.size();
    predicted_items += pi.size();
    for (const auto& item : pi) correct_items += gi.count(item);
  }

  Metrics m;
  m.las = tokens == 0 ? 1.0 : static_cast<double>(attached) / static_cast<double>(tokens);
  m.sem_precision = ratio(correct_items, predicted_items, gold_items);
  m.sem_recall = ratio(correct_items, gold_items, predicted_items);
  const double sum = m.sem_precision + m.sem_recall;
  m.sem_f1 = sum > 0.0 ? 2.0 * m.sem_precision * m.sem_recall / sum : 0.0;
  m.macro_f1 = (m.las + m.sem_f1) / 2.0;
  return m;
}

}  // namespace jparse
