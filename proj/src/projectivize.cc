#include "jparse/projectivize.h"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <optional>
#include <stdexcept>

namespace jparse {
namespace {

struct Tree {
  std::vector<int> head;            // index 0 unused
  std::vector<std::string> label;   // index 0 unused

  explicit Tree(const Sentence& s) : head(head_vector(s)), label(s.size() + 1) {
    for (const SynArc& arc : s.syn_arcs) label[arc.dependent] = arc.label;
  }

  bool dominates(int ancestor, int node) const {
    while (node > 0) {
      node = head[node];
      if (node == ancestor) return true;
    }
    return false;
  }

  bool arc_projective(int dependent) const {
    const int h = head[dependent];
    const int lo = std::min(h, dependent);
    const int hi = std::max(h, dependent);
    for (int k = lo + 1; k < hi; ++k) {
      if (!dominates(h, k)) return false;
    }
    return true;
  }

  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> out(head.size());
    for (int d = 1; d < static_cast<int>(head.size()); ++d) {
      if (head[d] >= 0) out[head[d]].push_back(d);
    }
    return out;
  }

  void write_to(Sentence& s) const {
    s.syn_arcs.clear();
    for (int d = 1; d < static_cast<int>(head.size()); ++d) {
      if (head[d] >= 0) s.syn_arcs.push_back({head[d], d, label[d]});
    }
    s.normalize();
  }
};

bool is_lifted(const std::string& label) {
  return label.find(kLiftMarker) != std::string::npos;
}

std::string lift_target(const std::string& label) {
  return label.substr(label.find(kLiftMarker) + 1);
}

}  // namespace

std::string base_label(const std::string& label) {
  return label.substr(0, label.find(kLiftMarker));
}

bool is_projective(const Sentence& sentence) {
  Tree tree(sentence);
  for (int d = 1; d <= sentence.size(); ++d) {
    if (tree.head[d] >= 0 && !tree.arc_projective(d)) return false;
  }
  return true;
}

Projectivized projectivize(const Sentence& sentence) {
  if (!is_tree(sentence)) throw std::invalid_argument("projectivize needs a tree");
  Projectivized out{sentence, {}};
  Tree tree(sentence);
  const std::vector<std::string> original = tree.label;
  const int n = sentence.size();
  while (true) {
    std::optional<int> pick;
    auto key = [&](int d) {
      const int h = tree.head[d];
      return std::pair(std::abs(h - d), std::min(h, d));
    };
    for (int d = 1; d <= n; ++d) {
      if (tree.arc_projective(d)) continue;
      if (!pick || key(d) < key(*pick)) pick = d;
    }
    if (!pick) break;
    const int d = *pick;
    const int h = tree.head[d];
    if (!is_lifted(tree.label[d])) {
      tree.label[d] += kLiftMarker + base_label(original[h]);
    }
    tree.head[d] = tree.head[h];
    out.trace.push_back({d, h, tree.head[d], tree.label[d]});
  }
  tree.write_to(out.sentence);
  return out;
}

Sentence deprojectivize(const Sentence& sentence) {
  Sentence out = sentence;
  Tree tree(sentence);
  const int n = sentence.size();

  auto depth = [&](int node) {
    int d = 0;
    for (; node > 0 && d <= n; node = tree.head[node]) ++d;
    return d;
  };

  // Lowering an arc moves its subtree, so the shallowest lifted arc is
  // picked afresh each round.
  while (true) {
    std::optional<int> pick;
    for (int d = 1; d <= n; ++d) {
      if (tree.head[d] < 0 || !is_lifted(tree.label[d])) continue;
      if (!pick || depth(d) < depth(*pick)) pick = d;
    }
    if (!pick) break;
    const int d = *pick;
    const std::string target = lift_target(tree.label[d]);
    const auto kids = tree.children();
    std::deque<int> queue(kids[tree.head[d]].begin(), kids[tree.head[d]].end());
    std::optional<int> found;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      if (node == d) continue;
      if (base_label(tree.label[node]) == target) {
        found = node;
        break;
      }
      for (int c : kids[node]) queue.push_back(c);
    }
    if (found) tree.head[d] = *found;
    tree.label[d] = base_label(tree.label[d]);
  }
  tree.write_to(out);
  return out;
}

}  // namespace jparse
