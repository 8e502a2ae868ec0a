#include "jparse/pipeline.h"

#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "jparse/model_io.h"

namespace jparse {

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::kJoint, Variant::kSyntaxOnly, Variant::kSemanticsOnly,
                    Variant::kHybrid}) {
    if (name == variant_name(v)) return v;
  }
  throw std::invalid_argument("unknown mode " + name +
                              " (expected joint, syntax-only, semantics-only or hybrid)");
}

const char* variant_name(Variant variant) {
  switch (variant) {
    case Variant::kJoint:
      return "joint";
    case Variant::kSyntaxOnly:
      return "syntax-only";
    case Variant::kSemanticsOnly:
      return "semantics-only";
    case Variant::kHybrid:
      return "hybrid";
  }
  return "?";
}

SystemMode system_mode(Variant variant) {
  switch (variant) {
    case Variant::kJoint:
      return SystemMode::kJoint;
    case Variant::kSemanticsOnly:
      return SystemMode::kSemanticsOnly;
    case Variant::kSyntaxOnly:
    case Variant::kHybrid:
      break;
  }
  return SystemMode::kSyntaxOnly;
}

namespace {

std::vector<io::Section> sections_of(const Pipeline& p) {
  std::vector<io::Section> sections;
  for (const ParserModel& m : p.models) sections.push_back({kParserTag, m.serialize()});
  if (p.identifier) sections.push_back({kPredicateTag, p.identifier->serialize()});
  return sections;
}

}  // namespace

std::string Pipeline::to_bytes() const {
  std::ostringstream out;
  io::write_container(out, sections_of(*this));
  return out.str();
}

void Pipeline::save(const std::filesystem::path& path) const {
  io::write_container(path, sections_of(*this));
}

Pipeline Pipeline::load(const std::filesystem::path& path) {
  Pipeline p;
  for (const io::Section& s : io::read_container(path)) {
    if (s.tag == kParserTag) {
      p.models.push_back(ParserModel::deserialize(s.payload));
    } else if (s.tag == kPredicateTag) {
      p.identifier.emplace(PredicateIdentifier::deserialize(s.payload));
    } else {
      throw io::FormatError("unknown section " + s.tag);
    }
  }
  if (p.models.size() == 2) {
    if (p.models[0].hyper().mode != SystemMode::kSyntaxOnly || !p.models[1].hyper().forced_syntax) {
      throw io::FormatError("two parser sections that do not form a hybrid pipeline");
    }
    p.variant = Variant::kHybrid;
  } else if (p.models.size() == 1) {
    switch (p.models[0].hyper().mode) {
      case SystemMode::kJoint:
        p.variant = Variant::kJoint;
        break;
      case SystemMode::kSyntaxOnly:
        p.variant = Variant::kSyntaxOnly;
        break;
      case SystemMode::kSemanticsOnly:
        p.variant = Variant::kSemanticsOnly;
        break;
    }
  } else if (!p.models.empty()) {
    throw io::FormatError("unexpected number of parser sections");
  }
  return p;
}

std::optional<std::vector<bool>> predicate_candidates(const Pipeline& pipeline,
                                                      const Sentence& input,
                                                      CorpusFormat format) {
  if (format == CorpusFormat::kConll2009) {
    std::vector<bool> mask(input.size() + 1, false);
    for (const Token& t : input.tokens) mask[t.index] = t.is_predicate;
    return mask;
  }
  if (pipeline.identifier) return pipeline.identifier->identify(input);
  return std::nullopt;
}

Sentence parse_sentence(const Pipeline& pipeline, const Sentence& input,
                        const std::optional<std::vector<bool>>& candidates, std::ostream* trace) {
  if (pipeline.models.empty()) throw std::invalid_argument("the model file holds no parser");
  DecodeOptions options;
  options.candidates = candidates;
  options.trace = trace;
  if (pipeline.variant != Variant::kHybrid) return decode(pipeline.models[0], input, options).parse;

  const Sentence tree = decode(pipeline.models[0], input, {std::nullopt, nullptr, trace}).parse;
  options.forced_syntax = &tree;
  return decode(pipeline.models[1], input, options).parse;
}

std::vector<Sentence> parse_all(const Pipeline& pipeline, const std::vector<Sentence>& inputs,
                                CorpusFormat format, int threads, std::ostream* trace) {
  std::vector<Sentence> out(inputs.size());
  std::vector<std::string> traces(trace ? inputs.size() : 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next++) < inputs.size();) {
      try {
        std::ostringstream local;
        out[i] = parse_sentence(pipeline, inputs[i], predicate_candidates(pipeline, inputs[i], format),
                                trace ? &local : nullptr);
        if (trace) traces[i] = local.str();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = inputs.size();
      }
    }
  };
  const int n = std::max(1, threads);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  if (trace) {
    for (std::size_t i = 0; i < traces.size(); ++i) *trace << (i ? "\n" : "") << traces[i];
  }
  return out;
}

Sentence strip_annotations(const Sentence& gold, CorpusFormat format) {
  Sentence out;
  out.tokens = gold.tokens;
  for (Token& t : out.tokens) {
    t.sense.reset();
    if (format == CorpusFormat::kConll2008) t.is_predicate = false;
  }
  return out;
}

}  // namespace jparse
