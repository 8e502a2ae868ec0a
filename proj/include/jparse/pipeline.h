#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jparse/corpus.h"
#include "jparse/decoder.h"
#include "jparse/model.h"
#include "jparse/predicate_identifier.h"

namespace jparse {

// Model variants selectable at parse time. Hybrid runs a syntax-only model
// and then a joint model that replays the predicted tree and predicts only
// semantics.
enum class Variant { kJoint, kSyntaxOnly, kSemanticsOnly, kHybrid };

Variant parse_variant(const std::string& name);
const char* variant_name(Variant variant);
SystemMode system_mode(Variant variant);  // hybrid -> syntax-only (the first stage)

inline const std::string kParserTag = "PRSR";
inline const std::string kPredicateTag = "PRED";

// Everything needed to parse: one parser model (two for hybrid) and an
// optional predicate identifier for inputs without marked predicates.
struct Pipeline {
  Variant variant = Variant::kJoint;
  std::vector<ParserModel> models;
  std::optional<PredicateIdentifier> identifier;

  // Container sections: PRSR per model in stage order, then PRED if set.
  void save(const std::filesystem::path& path) const;
  std::string to_bytes() const;
  static Pipeline load(const std::filesystem::path& path);
};

// Candidate mask for `input`: the marked predicates for CoNLL 2009 input,
// the identifier's output for CoNLL 2008 input when one is loaded, else
// every token.
std::optional<std::vector<bool>> predicate_candidates(const Pipeline& pipeline,
                                                      const Sentence& input,
                                                      CorpusFormat format);

Sentence parse_sentence(const Pipeline& pipeline, const Sentence& input,
                        const std::optional<std::vector<bool>>& candidates,
                        std::ostream* trace = nullptr);

// Sentence-parallel decoding; output order and content do not depend on
// `threads`. Traces, if requested, are written in input order.
std::vector<Sentence> parse_all(const Pipeline& pipeline, const std::vector<Sentence>& inputs,
                                CorpusFormat format, int threads = 1,
                                std::ostream* trace = nullptr);

// Arcs and predicate flags removed; what the parser sees at test time.
Sentence strip_annotations(const Sentence& gold, CorpusFormat format);

}  // namespace jparse
