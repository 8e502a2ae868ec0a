#include "jparse/transition.h"

#include <stdexcept>

namespace jparse {
namespace {

constexpr std::array<std::string_view, kNumTransitionKinds> kNames = {
    "S-Shift", "S-Reduce", "S-Right", "S-Left", "M-Shift", "M-Reduce",
    "M-Right", "M-Left",   "M-Swap",  "M-Pred", "M-Self",
};

}  // namespace

std::string_view kind_name(TransitionKind kind) {
  return kNames[static_cast<std::size_t>(kind)];
}

std::optional<TransitionKind> kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<TransitionKind>(i);
  }
  return std::nullopt;
}

ParamSlot param_slot(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::kSRight:
    case TransitionKind::kSLeft:
      return ParamSlot::kLabel;
    case TransitionKind::kMRight:
    case TransitionKind::kMLeft:
    case TransitionKind::kMSelf:
      return ParamSlot::kRole;
    case TransitionKind::kMPred:
      return ParamSlot::kSense;
    default:
      return ParamSlot::kNone;
  }
}

bool is_syntactic(TransitionKind kind) {
  return static_cast<int>(kind) <= static_cast<int>(TransitionKind::kSLeft);
}

std::string to_string(const Transition& t) {
  std::string out(kind_name(t.kind));
  if (!t.param.empty()) out += ":" + t.param;
  return out;
}

std::string to_display_string(const Transition& t) {
  std::string out(kind_name(t.kind));
  if (!t.param.empty()) out += "(" + t.param + ")";
  return out;
}

Transition parse_transition(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  auto kind = kind_from_name(name);
  if (!kind) throw std::invalid_argument("unknown transition: " + std::string(text));
  Transition t{*kind, colon == std::string_view::npos ? std::string()
                                                       : std::string(text.substr(colon + 1))};
  check_parameter(t);
  return t;
}

void check_parameter(const Transition& t) {
  const bool wants = param_slot(t.kind) != ParamSlot::kNone;
  if (wants && t.param.empty()) {
    throw std::invalid_argument(std::string(kind_name(t.kind)) + " requires a parameter");
  }
  if (!wants && !t.param.empty()) {
    throw std::invalid_argument(std::string(kind_name(t.kind)) + " takes no parameter");
  }
}

std::vector<TransitionKind> KindSet::to_vector() const {
  std::vector<TransitionKind> out;
  for (TransitionKind k : kAllTransitionKinds) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

}  // namespace jparse
