#include "jparse/decoder.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "jparse/oracle.h"
#include "jparse/pipeline.h"
#include "support/fixtures.h"
#include "support/random_parse.h"

namespace jparse {
namespace {

ParserModel random_model(SystemMode mode, std::uint64_t seed, bool forced = false) {
  Hyperparameters h = testing::tiny_hyperparameters(mode);
  h.forced_syntax = forced;
  return ParserModel::create(h, testing::synthetic_corpus(5, 3, 8, 7), nullptr, seed);
}

Sentence unlabeled(const Sentence& gold) { return strip_annotations(gold, CorpusFormat::kConll2009); }

void expect_well_formed(const Sentence& out, const Sentence& input, SystemMode mode) {
  ASSERT_EQ(out.size(), input.size());
  for (int i = 1; i <= input.size(); ++i) EXPECT_EQ(out.token(i).form, input.token(i).form);
  if (mode == SystemMode::kSemanticsOnly) {
    EXPECT_TRUE(out.syn_arcs.empty());
  } else {
    EXPECT_TRUE(is_tree(out));
    EXPECT_NO_THROW(validate(out));
  }
  for (const SemArc& arc : out.sem_arcs) {
    EXPECT_TRUE(out.token(arc.predicate).is_predicate);
    EXPECT_TRUE(input.token(arc.predicate).is_predicate);
  }
  for (const Token& t : out.tokens) EXPECT_EQ(t.is_predicate, t.sense.has_value());
}

TEST(Decoder, SingleTokenGetsOneRootArc) {
  const ParserModel m = random_model(SystemMode::kJoint, 1);
  std::mt19937_64 rng(3);
  const Sentence input = testing::random_tokens(1, rng);
  const Decoded d = decode(m, input);
  ASSERT_EQ(d.parse.syn_arcs.size(), 1u);
  EXPECT_EQ(d.parse.syn_arcs[0].head, 0);
  EXPECT_EQ(d.parse.syn_arcs[0].dependent, 1);
  EXPECT_LE(d.transitions.size(), transition_cap(1));
}

TEST(Decoder, SemanticsOnlyEmitsNoSyntax) {
  const ParserModel m = random_model(SystemMode::kSemanticsOnly, 2);
  const Sentence gold = testing::reopen_sentence();
  const Decoded d = decode(m, unlabeled(gold), {gold_predicate_mask(gold)});
  EXPECT_TRUE(d.parse.syn_arcs.empty());
  expect_well_formed(d.parse, gold, SystemMode::kSemanticsOnly);
}

TEST(Decoder, UnseenLemmaGetsFirstSense) {
  const ParserModel m = random_model(SystemMode::kJoint, 3);
  Sentence input = unlabeled(testing::reopen_sentence());
  input.tokens[4].lemma = "frobnicate";
  const Decoded d = decode(m, input, {gold_predicate_mask(testing::reopen_sentence())});
  EXPECT_EQ(d.parse.token(5).sense, "frobnicate.01");
  EXPECT_EQ(resolve_sense(m, input.token(5), std::nullopt), "frobnicate.01");
}

TEST(Decoder, CandidatesBoundPredicates) {
  const ParserModel m = random_model(SystemMode::kJoint, 4);
  const Sentence input = unlabeled(testing::reopen_sentence());
  const Decoded none = decode(m, input, {std::vector<bool>(7, false)});
  EXPECT_TRUE(none.parse.sem_arcs.empty());
  for (const Token& t : none.parse.tokens) EXPECT_FALSE(t.is_predicate);
}

TEST(Decoder, RandomModelsProduceTrees) {
  std::mt19937_64 rng(21);
  for (SystemMode mode : {SystemMode::kJoint, SystemMode::kSyntaxOnly, SystemMode::kSemanticsOnly}) {
    for (int i = 0; i < 30; ++i) {
      const ParserModel m = random_model(mode, 100 + i);
      testing::RandomParseOptions options;
      options.max_tokens = 25;
      const Sentence gold = testing::random_parse(options, rng);
      const Decoded d = decode(m, unlabeled(gold), {gold_predicate_mask(gold)});
      expect_well_formed(d.parse, gold, mode);
      EXPECT_LE(d.transitions.size(), transition_cap(gold.size()));
    }
  }
}

TEST(Decoder, ForcedModelKeepsGivenTree) {
  std::mt19937_64 rng(8);
  const ParserModel m = random_model(SystemMode::kJoint, 5, true);
  for (int i = 0; i < 20; ++i) {
    const Sentence gold = testing::random_parse({}, rng);
    DecodeOptions options{gold_predicate_mask(gold)};
    options.forced_syntax = &gold;
    const Decoded d = decode(m, unlabeled(gold), options);
    EXPECT_EQ(d.parse.syn_arcs, gold.syn_arcs);
    expect_well_formed(d.parse, gold, SystemMode::kJoint);
  }
}

TEST(Decoder, TraceListsEveryTransition) {
  const ParserModel m = random_model(SystemMode::kJoint, 6);
  std::ostringstream trace;
  DecodeOptions options;
  options.trace = &trace;
  const Decoded d = decode(m, unlabeled(testing::reopen_sentence()), options);
  const std::string text = trace.str();
  EXPECT_GE(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            d.transitions.size());
}

TEST(Pipeline, SaveLoadRoundTrip) {
  Pipeline p;
  p.variant = Variant::kHybrid;
  p.models.push_back(random_model(SystemMode::kSyntaxOnly, 1));
  p.models.push_back(random_model(SystemMode::kJoint, 2, true));
  p.identifier = PredicateIdentifier::create({4, 2, 3, 0.5}, {testing::reopen_sentence()}, 3);
  const auto path = std::filesystem::temp_directory_path() / "jparse_pipeline_test.model";
  p.save(path);
  const Pipeline back = Pipeline::load(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.variant, Variant::kHybrid);
  ASSERT_EQ(back.models.size(), 2u);
  EXPECT_TRUE(back.identifier.has_value());
  EXPECT_EQ(back.to_bytes(), p.to_bytes());
}

TEST(Pipeline, HybridReplaysFirstStageTree) {
  Pipeline p;
  p.variant = Variant::kHybrid;
  p.models.push_back(random_model(SystemMode::kSyntaxOnly, 1));
  p.models.push_back(random_model(SystemMode::kJoint, 2, true));
  const Sentence gold = testing::reopen_sentence();
  const Sentence input = unlabeled(gold);
  const auto mask = gold_predicate_mask(gold);
  const Sentence out = parse_sentence(p, input, mask);
  const Sentence tree = decode(p.models[0], input, {mask}).parse;
  EXPECT_EQ(out.syn_arcs, tree.syn_arcs);
  expect_well_formed(out, gold, SystemMode::kJoint);
}

TEST(Pipeline, CandidatesByFormat) {
  Pipeline p;
  p.models.push_back(random_model(SystemMode::kJoint, 1));
  const Sentence gold = testing::reopen_sentence();
  EXPECT_EQ(predicate_candidates(p, gold, CorpusFormat::kConll2009), gold_predicate_mask(gold));
  EXPECT_FALSE(predicate_candidates(p, strip_annotations(gold, CorpusFormat::kConll2008),
                                    CorpusFormat::kConll2008)
                   .has_value());
  p.identifier = PredicateIdentifier::create({4, 2, 3, 0.5}, {gold}, 3);
  const auto mask = predicate_candidates(p, gold, CorpusFormat::kConll2008);
  ASSERT_TRUE(mask.has_value());
  EXPECT_EQ(mask->size(), 7u);
}

TEST(Pipeline, ThreadCountDoesNotChangeOutput) {
  Pipeline p;
  p.models.push_back(random_model(SystemMode::kJoint, 9));
  std::mt19937_64 rng(4);
  std::vector<Sentence> inputs;
  for (int i = 0; i < 12; ++i) inputs.push_back(unlabeled(testing::random_parse({}, rng)));
  std::ostringstream t1, t3;
  const auto one = parse_all(p, inputs, CorpusFormat::kConll2009, 1, &t1);
  const auto three = parse_all(p, inputs, CorpusFormat::kConll2009, 3, &t3);
  EXPECT_EQ(one, three);
  EXPECT_EQ(t1.str(), t3.str());
}

}  // namespace
}  // namespace jparse
