#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jparse {

// Declaration order is the canonical ordering used for tie-breaking.
enum class TransitionKind : std::uint8_t {
  kSShift,
  kSReduce,
  kSRight,
  kSLeft,
  kMShift,
  kMReduce,
  kMRight,
  kMLeft,
  kMSwap,
  kMPred,
  kMSelf,
};

inline constexpr int kNumTransitionKinds = 11;

inline constexpr std::array<TransitionKind, kNumTransitionKinds> kAllTransitionKinds = {
    TransitionKind::kSShift, TransitionKind::kSReduce, TransitionKind::kSRight,
    TransitionKind::kSLeft,  TransitionKind::kMShift,  TransitionKind::kMReduce,
    TransitionKind::kMRight, TransitionKind::kMLeft,   TransitionKind::kMSwap,
    TransitionKind::kMPred,  TransitionKind::kMSelf,
};

enum class ParamSlot { kNone, kLabel, kRole, kSense };

std::string_view kind_name(TransitionKind kind);
std::optional<TransitionKind> kind_from_name(std::string_view name);
ParamSlot param_slot(TransitionKind kind);
bool is_syntactic(TransitionKind kind);

// `param` holds the syntactic label, semantic role or predicate sense the
// kind asks for, and is empty for kinds without a parameter.
struct Transition {
  TransitionKind kind = TransitionKind::kSShift;
  std::string param;

  auto operator<=>(const Transition&) const = default;
};

// "KIND" or "KIND:param", e.g. "S-Left:sbj", "M-Pred:expect.01".
std::string to_string(const Transition& t);
// "S-Left(sbj)", the layout used in debug traces.
std::string to_display_string(const Transition& t);
Transition parse_transition(std::string_view text);

// Throws std::invalid_argument unless the parameter matches the kind.
void check_parameter(const Transition& t);

class KindSet {
 public:
  void insert(TransitionKind k) { bits_.set(static_cast<std::size_t>(k)); }
  void erase(TransitionKind k) { bits_.reset(static_cast<std::size_t>(k)); }
  bool contains(TransitionKind k) const { return bits_.test(static_cast<std::size_t>(k)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  std::vector<TransitionKind> to_vector() const;

  bool operator==(const KindSet&) const = default;

 private:
  std::bitset<kNumTransitionKinds> bits_;
};

}  // namespace jparse
