#include "jparse/parser_state.h"

#include <stdexcept>

namespace jparse {
namespace {

void collect(const FragmentTree* node, std::vector<Attachment>& out) {
  if (node == nullptr || node->is_leaf()) return;
  const int dependent = node->dependent ? node->dependent->token : node->token;
  out.push_back({node->token, dependent, node->label, node->layer});
  collect(node->head.get(), out);
  // A self-attachment shares its head and dependent subtree.
  if (node->dependent && node->dependent != node->head) collect(node->dependent.get(), out);
}

}  // namespace

Fragment atomic_fragment(int token) {
  auto leaf = std::make_shared<FragmentTree>();
  leaf->token = token;
  return Fragment{std::move(leaf), -1};
}

std::vector<Attachment> attachments(const Fragment& fragment) {
  std::vector<Attachment> out;
  collect(fragment.tree.get(), out);
  return out;
}

const char* system_mode_name(SystemMode mode) {
  switch (mode) {
    case SystemMode::kJoint:
      return "joint";
    case SystemMode::kSyntaxOnly:
      return "syntax-only";
    case SystemMode::kSemanticsOnly:
      return "semantics-only";
  }
  return "?";
}

std::vector<int> ParserState::buffer_tokens() const {
  std::vector<int> out;
  for (auto it = buffer.rbegin(); it != buffer.rend(); ++it) out.push_back(it->root_token());
  return out;
}

std::vector<int> ParserState::syn_tokens() const {
  std::vector<int> out;
  for (const auto& f : syn_stack) out.push_back(f.root_token());
  return out;
}

std::vector<int> ParserState::sem_tokens() const {
  std::vector<int> out;
  for (const auto& f : sem_stack) out.push_back(f.root_token());
  return out;
}

ParserState initial_state(const Sentence& sentence, const StateOptions& options) {
  const int n = sentence.size();
  if (n == 0) throw std::invalid_argument("cannot parse an empty sentence");
  ParserState state;
  state.mode = options.mode;
  state.num_tokens = n;
  state.buffer.reserve(n + 1);
  state.buffer.push_back(atomic_fragment(kRootToken));
  for (int i = n; i >= 1; --i) state.buffer.push_back(atomic_fragment(i));
  state.phase = Phase::kSyntactic;
  state.syn_head.assign(n + 1, -1);
  if (options.predicate_candidates) {
    if (static_cast<int>(options.predicate_candidates->size()) != n + 1) {
      throw std::invalid_argument("predicate candidate mask must have n+1 entries");
    }
    state.predicate_candidates = *options.predicate_candidates;
  } else {
    state.predicate_candidates.assign(n + 1, true);
  }
  state.predicate_candidates[kRootToken] = false;
  return state;
}

bool is_terminal(const ParserState& state) {
  if (!state.buffer.empty()) return false;
  auto single_root = [](const std::vector<Fragment>& stack) {
    return stack.size() == 1 && stack.front().root_token() == kRootToken;
  };
  switch (state.mode) {
    case SystemMode::kJoint:
      return single_root(state.syn_stack) && single_root(state.sem_stack);
    case SystemMode::kSyntaxOnly:
      return single_root(state.syn_stack);
    case SystemMode::kSemanticsOnly:
      return single_root(state.sem_stack);
  }
  return false;
}

}  // namespace jparse
