#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/transition.h"

namespace jparse {

inline constexpr int kRootToken = 0;

enum class Layer : std::uint8_t { kSyntactic, kSemantic, kPredicate };

// Symbolic side of a parse fragment: a ternary tree whose internal nodes
// join a head subtree, a dependent subtree and a relation label. Leaves are
// single tokens. Nodes are immutable and shared between fragments.
struct FragmentTree {
  int token = kRootToken;  // root token of this subtree
  Layer layer = Layer::kSyntactic;
  std::string label;
  std::shared_ptr<const FragmentTree> head;       // null for leaves
  std::shared_ptr<const FragmentTree> dependent;  // null for leaves and predicate nodes

  bool is_leaf() const { return head == nullptr; }
};

struct Attachment {
  int head = 0;
  int dependent = 0;
  std::string label;
  Layer layer = Layer::kSyntactic;

  auto operator<=>(const Attachment&) const = default;
};

// A stack or buffer element: symbolic structure plus the id of its learned
// vector in the current computation graph (-1 when no model is attached).
struct Fragment {
  std::shared_ptr<const FragmentTree> tree;
  int vector_id = -1;

  int root_token() const { return tree->token; }
};

Fragment atomic_fragment(int token);

// All attachments inside the fragment, for inspection and debugging.
std::vector<Attachment> attachments(const Fragment& fragment);

enum class Phase : std::uint8_t { kSyntactic, kSemantic };

// Joint runs both transition families with copy-on-shift semantics.
// Syntax-only moves items on S-Shift/S-Right and never uses M; semantics-only
// never uses S.
enum class SystemMode : std::uint8_t { kJoint, kSyntaxOnly, kSemanticsOnly };

const char* system_mode_name(SystemMode mode);

struct StateOptions {
  SystemMode mode = SystemMode::kJoint;
  // Tokens allowed to become predicates (index 0 unused). When absent every
  // token is a candidate.
  std::optional<std::vector<bool>> predicate_candidates;
};

struct ParserState {
  SystemMode mode = SystemMode::kJoint;
  int num_tokens = 0;

  std::vector<Fragment> syn_stack;  // back() is the top
  std::vector<Fragment> sem_stack;  // back() is the top
  // Stored as a stack: back() is the buffer front and index 0 holds the
  // root symbol, which is the last item of the buffer.
  std::vector<Fragment> buffer;

  std::vector<Transition> history;  // append-only
  Phase phase = Phase::kSyntactic;

  std::vector<SynArc> created_syn_arcs;  // creation order
  std::vector<SemArc> created_sem_arcs;  // creation order
  std::map<int, std::string> created_preds;
  std::vector<int> syn_head;  // per token, -1 while unattached
  std::set<std::pair<int, int>> sem_pairs;  // (predicate, argument)
  std::vector<bool> predicate_candidates;   // index 0 (root) is always false
  std::optional<std::pair<int, int>> last_swapped;  // unordered pair, stored sorted

  bool buffer_empty() const { return buffer.empty(); }
  const Fragment& buffer_front() const { return buffer.back(); }
  // Root tokens of the buffer items, front first.
  std::vector<int> buffer_tokens() const;
  std::vector<int> syn_tokens() const;  // bottom to top
  std::vector<int> sem_tokens() const;  // bottom to top

  bool has_syn_head(int token) const { return token != kRootToken && syn_head[token] >= 0; }
};

ParserState initial_state(const Sentence& sentence, const StateOptions& options = {});

// True when the buffer is empty and each stack the mode uses holds exactly
// one structure, headed by the root.
bool is_terminal(const ParserState& state);

}  // namespace jparse
