#include "jparse/transition_system.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "jparse/oracle.h"
#include "support/random_parse.h"

namespace jparse {
namespace {

using K = TransitionKind;
using testing::reopen_sentence;

KindSet kinds(std::initializer_list<K> list) {
  KindSet out;
  for (K k : list) out.insert(k);
  return out;
}

Sentence one_token() {
  Sentence s;
  s.tokens.push_back({1, "w", "w", "NN", false, std::nullopt});
  return s;
}

TEST(InitialState, BufferHoldsTokensThenRoot) {
  ParserState s = initial_state(reopen_sentence());
  EXPECT_EQ(s.buffer_tokens(), (std::vector<int>{1, 2, 3, 4, 5, 6, 0}));
  EXPECT_TRUE(s.syn_stack.empty());
  EXPECT_TRUE(s.sem_stack.empty());
  EXPECT_TRUE(s.history.empty());
  EXPECT_EQ(s.phase, Phase::kSyntactic);
  EXPECT_FALSE(is_terminal(s));
}

TEST(InitialState, OneToken) {
  ParserState s = initial_state(one_token());
  EXPECT_EQ(s.buffer_tokens(), (std::vector<int>{1, 0}));
}

TEST(InitialState, RejectsEmptySentence) {
  EXPECT_THROW(initial_state(Sentence{}), std::invalid_argument);
}

TEST(Allowed, InitialStateOnlyShifts) {
  EXPECT_EQ(allowed(initial_state(reopen_sentence())), kinds({K::kSShift}));
}

TEST(Allowed, AfterFirstShiftSemanticPhase) {
  ParserState s = initial_state(reopen_sentence());
  apply(s, {K::kSShift, ""});
  EXPECT_EQ(s.phase, Phase::kSemantic);
  EXPECT_EQ(allowed(s), kinds({K::kMShift, K::kMPred, K::kMSelf}));
}

TEST(Allowed, CandidateMaskRestrictsPredicates) {
  ParserState s = initial_state(reopen_sentence(), {SystemMode::kJoint,
                                                  gold_predicate_mask(reopen_sentence())});
  apply(s, {K::kSShift, ""});
  EXPECT_EQ(allowed(s), kinds({K::kMShift}));
}

TEST(Allowed, TerminalStateThrows) {
  ParserState s = replay(one_token(), {{K::kSShift, ""},
                                       {K::kMShift, ""},
                                       {K::kSLeft, "root"},
                                       {K::kSShift, ""},
                                       {K::kMReduce, ""},
                                       {K::kMShift, ""}});
  EXPECT_TRUE(is_terminal(s));
  EXPECT_THROW(allowed(s), TransitionError);
}

TEST(Apply, OneTokenSequence) {
  ParserState s = replay(one_token(), {{K::kSShift, ""},
                                       {K::kMShift, ""},
                                       {K::kSLeft, "root"},
                                       {K::kSShift, ""},
                                       {K::kMReduce, ""},
                                       {K::kMShift, ""}});
  ASSERT_TRUE(is_terminal(s));
  EXPECT_EQ(s.created_syn_arcs, (std::vector<SynArc>{{0, 1, "root"}}));
}

TEST(Apply, IllegalTransitionNamesConstraint) {
  ParserState s = initial_state(reopen_sentence());
  try {
    apply(s, {K::kSReduce, ""});
    FAIL();
  } catch (const TransitionError& e) {
    EXPECT_NE(std::string(e.what()).find("syntactic stack is empty"), std::string::npos);
  }
  EXPECT_THROW(apply(s, {K::kMShift, ""}), TransitionError);
  EXPECT_THROW(apply(s, {K::kSLeft, ""}), TransitionError);  // missing label
}

TEST(Apply, SecondSwapOfSamePairRejected) {
  std::mt19937_64 rng(1);
  Sentence s3 = testing::random_tokens(3, rng);
  ParserState s = initial_state(s3, {SystemMode::kSemanticsOnly, std::nullopt});
  apply(s, {K::kMShift, ""});
  apply(s, {K::kMShift, ""});
  apply(s, {K::kMSwap, ""});
  EXPECT_EQ(s.sem_tokens(), (std::vector<int>{2, 1}));
  EXPECT_THROW(apply(s, {K::kMSwap, ""}), TransitionError);
  EXPECT_FALSE(allowed(s).contains(K::kMSwap));
}

TEST(Apply, DuplicateDependenciesRejected) {
  std::mt19937_64 rng(2);
  Sentence s3 = testing::random_tokens(3, rng);
  ParserState s = initial_state(s3, {SystemMode::kSemanticsOnly, std::nullopt});
  apply(s, {K::kMShift, ""});
  apply(s, {K::kMRight, "A0"});
  EXPECT_THROW(apply(s, {K::kMRight, "A1"}), TransitionError);
  apply(s, {K::kMPred, "x.01"});
  EXPECT_THROW(apply(s, {K::kMPred, "x.02"}), TransitionError);
  apply(s, {K::kMSelf, "A2"});
  EXPECT_THROW(apply(s, {K::kMSelf, "A2"}), TransitionError);
}

TEST(Apply, SyntaxOnlyMovesTokens) {
  ParserState s = initial_state(one_token(), {SystemMode::kSyntaxOnly, std::nullopt});
  apply(s, {K::kSShift, ""});
  EXPECT_EQ(s.buffer_tokens(), (std::vector<int>{0}));
  EXPECT_FALSE(allowed(s).contains(K::kMShift));
}

TEST(Apply, ComposedFragmentsRecordAttachments) {
  ParserState s = initial_state(reopen_sentence());
  apply(s, {K::kSShift, ""});
  apply(s, {K::kMShift, ""});
  apply(s, {K::kSLeft, "sbj"});
  const auto atts = attachments(s.buffer.back());
  ASSERT_EQ(atts.size(), 1u);
  EXPECT_EQ(atts[0], (Attachment{2, 1, "sbj", Layer::kSyntactic}));
}

// Legal and illegal moves agree with allowed() on random walks.
TEST(Allowed, AgreesWithApplyOnRandomWalks) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const SystemMode mode = static_cast<SystemMode>(trial % 3);
    ParserState s = initial_state(testing::random_tokens(n, rng), {mode, std::nullopt});
    std::size_t steps = 0;
    while (!is_terminal(s)) {
      const KindSet ok = allowed(s);
      ASSERT_FALSE(ok.empty());
      for (K k : kAllTransitionKinds) {
        const Transition t{k, param_slot(k) == ParamSlot::kNone ? "" : "x"};
        EXPECT_EQ(!violation(s, t).has_value(), ok.contains(k));
      }
      const auto legal = ok.to_vector();
      const K k = legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
      apply(s, {k, param_slot(k) == ParamSlot::kNone ? "" : "x"});
      ASSERT_LE(++steps, transition_cap(n));
    }
    if (mode != SystemMode::kSemanticsOnly) {
      EXPECT_TRUE(is_tree(extract_parse(s, testing::random_tokens(n, rng))));
    }
  }
}

TEST(Trace, MatchesGoldenRows) {
  const Sentence gold = reopen_sentence();
  const OracleResult oracle = to_transitions(gold);
  std::ostringstream out;
  TraceWriter trace(out, gold);
  ParserState s = initial_state(gold, {SystemMode::kJoint, gold_predicate_mask(gold)});
  trace.initial(s);
  for (const Transition& t : oracle.transitions) {
    const auto syn = s.created_syn_arcs.size();
    const auto sem = s.created_sem_arcs.size();
    apply(s, t);
    trace.step(s, t, syn, sem);
  }
  EXPECT_EQ(out.str(), testing::read_file(std::string(JPARSE_TEST_DATA) + "/reopen_trace.tsv"));
}

}  // namespace
}  // namespace jparse
