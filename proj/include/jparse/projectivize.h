#pragma once

#include <string>
#include <vector>

#include "jparse/corpus.h"

namespace jparse {

// Separates a lifted arc's own label from the label of the head it was
// lifted away from: "nmod^obj".
inline constexpr char kLiftMarker = '^';

struct Lift {
  int dependent = 0;
  int from_head = 0;
  int to_head = 0;
  std::string label;  // label after the lift
};

struct Projectivized {
  Sentence sentence;
  std::vector<Lift> trace;  // in the order the lifts were made
};

// True when no syntactic arc crosses another (root arcs included).
bool is_projective(const Sentence& sentence);

// Lifts the shortest non-projective arc (leftmost on ties) to its
// grandparent until the tree is projective. A lifted dependent's label
// becomes "label^head_label", where head_label is the original label of its
// first syntactic head; later lifts of the same arc keep that label.
Projectivized projectivize(const Sentence& sentence);

// Top-down, lowers every arc labeled "d^h" to the first node labeled h found
// breadth-first, left to right, below its current head and outside its own
// subtree, then strips the marker. Arcs with no such node keep their head.
Sentence deprojectivize(const Sentence& sentence);

// The label with any lift marker removed.
std::string base_label(const std::string& label);

}  // namespace jparse
