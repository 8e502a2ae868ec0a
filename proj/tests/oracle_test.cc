#include "jparse/oracle.h"

#include <gtest/gtest.h>

#include <random>

#include "jparse/projectivize.h"
#include "jparse/transition_system.h"
#include "support/random_parse.h"

namespace jparse {
namespace {

using K = TransitionKind;

std::vector<Transition> reopen_sequence() {
  return {
      {K::kSShift, ""},         {K::kMShift, ""},           {K::kSLeft, "sbj"},
      {K::kSShift, ""},         {K::kMShift, ""},           {K::kSRight, "vc"},
      {K::kMPred, "expect.01"}, {K::kMReduce, ""},          {K::kMLeft, "A1"},
      {K::kMShift, ""},         {K::kSRight, "oprd"},       {K::kMRight, "C-A1"},
      {K::kMReduce, ""},        {K::kMShift, ""},           {K::kSRight, "im"},
      {K::kMPred, "reopen.01"}, {K::kMReduce, ""},          {K::kMLeft, "A1"},
      {K::kMReduce, ""},        {K::kMShift, ""},           {K::kSRight, "tmp"},
      {K::kMRight, "AM-TMP"},   {K::kMReduce, ""},          {K::kMShift, ""},
      {K::kSReduce, ""},        {K::kSReduce, ""},          {K::kSReduce, ""},
      {K::kSReduce, ""},        {K::kSLeft, "root"},        {K::kSShift, ""},
      {K::kMReduce, ""},        {K::kMShift, ""},
  };
}

Sentence make_sentence(int n) {
  std::mt19937_64 rng(n);
  return testing::random_tokens(n, rng);
}

TEST(Oracle, ReopenSentenceSequence) {
  const OracleResult r = to_transitions(testing::reopen_sentence());
  EXPECT_EQ(r.transitions, reopen_sequence());
  EXPECT_TRUE(r.exact);
}

TEST(Oracle, Deterministic) {
  const Sentence s = testing::reopen_sentence();
  EXPECT_EQ(to_transitions(s).transitions, to_transitions(s).transitions);
}

TEST(Oracle, SelfArcUsesMSelf) {
  // "the problem remains": problem.01 fills its own A2 role.
  Sentence s = make_sentence(3);
  s.tokens[1].is_predicate = true;
  s.tokens[1].sense = "problem.01";
  s.syn_arcs = {{2, 1, "nmod"}, {3, 2, "sbj"}, {0, 3, "root"}};
  s.sem_arcs = {{2, 2, "A2"}};
  s.normalize();
  const OracleResult r = to_transitions(s);
  EXPECT_TRUE(r.exact);
  EXPECT_NE(std::find(r.transitions.begin(), r.transitions.end(), Transition{K::kMSelf, "A2"}),
            r.transitions.end());
}

TEST(Oracle, SingleCrossingResolvedBySwap) {
  // Arcs 1->3 and 2->4 cross.
  Sentence s = make_sentence(4);
  for (int i : {0, 1}) {
    s.tokens[i].is_predicate = true;
    s.tokens[i].sense = s.tokens[i].lemma + ".01";
  }
  s.syn_arcs = {{0, 1, "root"}, {1, 2, "a"}, {2, 3, "b"}, {3, 4, "c"}};
  s.sem_arcs = {{1, 3, "A0"}, {2, 4, "A1"}};
  s.normalize();
  const OracleResult r = to_transitions(s);
  EXPECT_TRUE(r.exact);
  EXPECT_NE(std::find(r.transitions.begin(), r.transitions.end(), Transition{K::kMSwap, ""}),
            r.transitions.end());
}

TEST(Oracle, SyntaxOnlyAndSemanticsOnlyModes) {
  const Sentence s = testing::reopen_sentence();
  const OracleResult syn = to_transitions(s, SystemMode::kSyntaxOnly);
  EXPECT_TRUE(syn.exact);
  for (const Transition& t : syn.transitions) EXPECT_TRUE(is_syntactic(t.kind));
  const OracleResult sem = to_transitions(s, SystemMode::kSemanticsOnly);
  EXPECT_TRUE(sem.exact);
  for (const Transition& t : sem.transitions) EXPECT_FALSE(is_syntactic(t.kind));
}

TEST(Oracle, RandomRoundTrip) {
  std::mt19937_64 rng(11);
  testing::RandomParseOptions options;
  int non_crossing = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Sentence gold = testing::random_parse(options, rng);
    const OracleResult r = to_transitions(gold);
    const ParserState end =
        replay(gold, r.transitions, {SystemMode::kJoint, gold_predicate_mask(gold)});
    ASSERT_TRUE(is_terminal(end));
    EXPECT_EQ(r.exact, same_parse(extract_parse(end, gold), gold, SystemMode::kJoint));
    EXPECT_LE(r.transitions.size(), transition_cap(gold.size()));
    if (testing::semantic_crossings(gold) == 0) {
      ++non_crossing;
      EXPECT_TRUE(r.exact) << "trial " << trial;
    }
  }
  EXPECT_GT(non_crossing, 100);
}

TEST(Projectivize, ProjectiveTreeUnchanged) {
  const Sentence s = testing::reopen_sentence();
  EXPECT_TRUE(is_projective(s));
  const Projectivized p = projectivize(s);
  EXPECT_EQ(p.sentence, s);
  EXPECT_TRUE(p.trace.empty());
  EXPECT_EQ(deprojectivize(s), s);
}

TEST(Projectivize, MinimalNonProjectiveTree) {
  // 1->3 crosses 2->4.
  Sentence s = make_sentence(4);
  s.syn_arcs = {{0, 1, "root"}, {1, 3, "obj"}, {1, 2, "adv"}, {2, 4, "nmod"}};
  s.normalize();
  ASSERT_FALSE(is_projective(s));
  const Projectivized p = projectivize(s);
  EXPECT_TRUE(is_projective(p.sentence));
  ASSERT_EQ(p.trace.size(), 1u);
  EXPECT_EQ(p.trace[0].label.find(kLiftMarker) != std::string::npos, true);
  EXPECT_EQ(deprojectivize(p.sentence), s);
}

TEST(Projectivize, UnresolvableLabelStripped) {
  Sentence s = make_sentence(2);
  s.syn_arcs = {{0, 1, "root"}, {1, 2, "x^missing"}};
  s.normalize();
  Sentence expected = s;
  expected.syn_arcs[1].label = "x";
  EXPECT_EQ(deprojectivize(s), expected);
}

TEST(Projectivize, RandomInverse) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    Sentence s = make_sentence(n);
    const std::vector<int> heads = testing::random_heads(n, rng);
    for (int d = 1; d <= n; ++d) s.syn_arcs.push_back({heads[d], d, "l" + std::to_string(d)});
    s.normalize();
    const Projectivized p = projectivize(s);
    ASSERT_TRUE(is_projective(p.sentence));
    ASSERT_TRUE(is_tree(p.sentence));
    std::vector<int> lifts(n + 1, 0);
    bool single = true;
    for (const Lift& l : p.trace) single &= ++lifts[l.dependent] <= 1;
    if (!single) continue;
    ++checked;
    EXPECT_EQ(deprojectivize(p.sentence), s) << "trial " << trial;
  }
  EXPECT_GT(checked, 500);
}

}  // namespace
}  // namespace jparse
