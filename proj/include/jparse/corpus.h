#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jparse {

enum class CorpusFormat { kConll2008, kConll2009 };

CorpusFormat parse_corpus_format(const std::string& name);
const char* corpus_format_name(CorpusFormat format);

struct Token {
  int index = 0;  // 1-based position in the sentence
  std::string form;
  std::string lemma;  // predicted lemma
  std::string pos;    // predicted part-of-speech tag
  bool is_predicate = false;
  std::optional<std::string> sense;  // e.g. "expect.01"

  bool operator==(const Token&) const = default;
};

// Head 0 denotes the artificial root symbol.
struct SynArc {
  int head = 0;
  int dependent = 0;
  std::string label;

  auto operator<=>(const SynArc&) const = default;
};

struct SemArc {
  int predicate = 0;
  int argument = 0;
  std::string role;

  auto operator<=>(const SemArc&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<SynArc> syn_arcs;  // kept sorted by (dependent, head, label)
  std::vector<SemArc> sem_arcs;  // kept sorted by (predicate, argument, role)

  int size() const { return static_cast<int>(tokens.size()); }
  const Token& token(int index) const { return tokens.at(index - 1); }

  // Restores the canonical arc ordering; call after editing arcs by hand.
  void normalize();

  bool operator==(const Sentence&) const = default;
};

// Raised for malformed corpus input. line() is 1-based, 0 when unknown.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& message, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<Sentence> read_conll(std::istream& in, CorpusFormat format);
std::vector<Sentence> read_conll(const std::filesystem::path& path,
                                 CorpusFormat format);

void write_conll(std::ostream& out, std::span<const Sentence> sentences,
                 CorpusFormat format);
void write_conll(const std::filesystem::path& path,
                 std::span<const Sentence> sentences, CorpusFormat format);

// Per-token head indices (index 0 unused, -1 when a token has no head).
std::vector<int> head_vector(const Sentence& sentence);

// True when every token has exactly one head and following heads always
// reaches the root.
bool is_tree(const Sentence& sentence);

// Checks the Token/Sentence invariants; throws std::invalid_argument.
void validate(const Sentence& sentence);

}  // namespace jparse
