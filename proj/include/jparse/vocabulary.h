#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace jparse {

// Dense string <-> id mapping; ids follow insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const std::vector<std::string>& symbols) {
    for (const auto& s : symbols) add(s);
  }

  int add(const std::string& symbol) {
    auto [it, inserted] = ids_.emplace(symbol, static_cast<int>(symbols_.size()));
    if (inserted) symbols_.push_back(symbol);
    return it->second;
  }

  // -1 when absent.
  int id(const std::string& symbol) const {
    auto it = ids_.find(symbol);
    return it == ids_.end() ? -1 : it->second;
  }

  int id_or(const std::string& symbol, int fallback) const {
    const int i = id(symbol);
    return i < 0 ? fallback : i;
  }

  bool contains(const std::string& symbol) const { return ids_.count(symbol) > 0; }
  const std::string& symbol(int id) const { return symbols_.at(id); }
  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const Vocabulary& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace jparse
