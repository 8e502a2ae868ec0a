#include "jparse/model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "jparse/model_io.h"
#include "jparse/oracle.h"
#include "jparse/parser_run.h"
#include "jparse/trainer.h"
#include "support/fixtures.h"
#include "support/gradient_check.h"
#include "support/random_parse.h"

namespace jparse {
namespace {

using nn::Expr;
using nn::Graph;
using nn::Parameter;
using testing::check_gradients;

constexpr double kTolerance = 1e-4;

ParserModel tiny_model(SystemMode mode = SystemMode::kJoint, std::uint64_t seed = 1) {
  return ParserModel::create(testing::tiny_hyperparameters(mode), {testing::reopen_sentence()},
                             nullptr, seed);
}

std::vector<Parameter*> all_params(const ParserModel& m) {
  std::vector<Parameter*> out;
  for (const auto& p : m.params().all()) out.push_back(p.get());
  return out;
}

void set_all(const ParserModel& m, const std::string& name, double value) {
  m.params().get(name).value.setConstant(value);
}

TEST(ParserModel, VocabulariesStartWithUnknown) {
  const ParserModel m = tiny_model();
  EXPECT_EQ(m.vocab().words.symbol(0), kUnknownSymbol);
  EXPECT_EQ(m.vocab().labels.symbol(0), kUnknownSymbol);
  EXPECT_EQ(m.vocab().senses.symbol(0), kUnknownSense);
  EXPECT_EQ(m.vocab().lexicon.at("expect"), std::vector<std::string>{"expect.01"});
}

TEST(ParserModel, ActionInventory) {
  const ParserModel m = tiny_model();
  EXPECT_GE(m.action_id({TransitionKind::kSLeft, "sbj"}), 0);
  // Unseen labels fall back to the placeholder, which is never proposed.
  const int placeholder = m.action_id({TransitionKind::kSLeft, "nope"});
  ASSERT_GE(placeholder, 0);
  EXPECT_FALSE(m.actions()[placeholder].selectable);
  for (int id : m.actions_of_kind(TransitionKind::kSLeft)) EXPECT_NE(id, placeholder);
  EXPECT_EQ(m.sense_actions("expect").size(), 1u);
  const int unk = m.sense_actions("frobnicate").at(0);
  EXPECT_EQ(m.actions()[unk].transition.param, kUnknownSense);
}

TEST(ParserModel, ResolveSense) {
  const ParserModel m = tiny_model();
  EXPECT_EQ(m.resolve_sense("frobnicate", std::nullopt), "frobnicate.01");
  EXPECT_EQ(m.resolve_sense("frobnicate", kUnknownSense), "frobnicate.01");
  EXPECT_EQ(m.resolve_sense("expect", std::string("expect.01")), "expect.01");
  EXPECT_EQ(m.resolve_sense("expect", std::nullopt), "expect.01");
}

TEST(ParserModel, ZeroCompositionGivesZero) {
  const ParserModel m = tiny_model();
  for (const char* name : {"gs.Z", "gs.e", "gm.Z", "gm.e", "gd.Z", "gd.e"}) set_all(m, name, 0.0);
  Graph g;
  const Expr v = g.constant(nn::VectorXd::Ones(4));
  EXPECT_EQ(g.value(m.compose_syn(g, v, v, "sbj")).norm(), 0.0);
  EXPECT_EQ(g.value(m.compose_sem(g, v, v, "A1")).norm(), 0.0);
  EXPECT_EQ(g.value(m.compose_pred(g, v, "expect.01")).norm(), 0.0);
}

TEST(ParserModel, SummarizerRectifies) {
  const ParserModel m = tiny_model();
  set_all(m, "state.W", 0.0);
  Graph g;
  const std::vector<Expr> queries(4, g.constant(nn::VectorXd::Ones(3)));
  set_all(m, "state.d", -1.0);
  EXPECT_EQ(g.value(m.summarize_state(g, queries, 0.0, nullptr)).norm(), 0.0);
  set_all(m, "state.d", 1.0);
  EXPECT_EQ(g.value(m.summarize_state(g, queries, 0.0, nullptr)), nn::VectorXd::Ones(4));
}

TEST(ParserModel, ScorerUsesOnlyAllowedActions) {
  const ParserModel m = tiny_model();
  set_all(m, "theta", 0.0);
  set_all(m, "q", 0.0);
  const int shift = m.action_id({TransitionKind::kSShift, ""});
  const int reduce = m.action_id({TransitionKind::kSReduce, ""});
  const int mshift = m.action_id({TransitionKind::kMShift, ""});
  m.params().get("q").value(shift, 0) = 1.0;
  m.params().get("q").value(mshift, 0) = 100.0;

  Sentence s = testing::reopen_sentence();
  ParserState state = initial_state(s);
  Graph g;
  ParserRun run(m, g, s, state);
  const std::vector<int> actions{shift, reduce};
  EXPECT_EQ(run.best(actions, run.scores(actions)), shift);
  // Equal scores: lowest id wins.
  m.params().get("q").value(shift, 0) = 0.0;
  EXPECT_EQ(run.best(actions, run.scores(actions)), std::min(shift, reduce));
}

TEST(ParserModel, StepLossValues) {
  const ParserModel m = tiny_model();
  const Sentence s = testing::reopen_sentence();
  ParserState state = initial_state(s, {SystemMode::kJoint, gold_predicate_mask(s)});
  Graph g;
  ParserRun run(m, g, s, state);
  // Only S-Shift is allowed at the start.
  EXPECT_EQ(g.scalar(run.step_loss(state, {TransitionKind::kSShift, ""})), 0.0);
  EXPECT_THROW(run.step_loss(state, {TransitionKind::kMShift, ""}), TransitionError);
  run.take(state, {TransitionKind::kSShift, ""});

  set_all(m, "theta", 0.0);
  set_all(m, "q", 0.0);
  const std::vector<int> candidates = run.candidate_actions(state);
  EXPECT_NEAR(g.scalar(run.step_loss(state, {TransitionKind::kMShift, ""})),
              std::log(static_cast<double>(candidates.size())), 1e-12);
}

TEST(ParserModel, CompositionGradients) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ParserModel m = tiny_model(SystemMode::kJoint, trial + 1);
    nn::ParameterSet inputs;
    Parameter& v = inputs.add("v", 4, 1, nn::Init::kGlorot);
    Parameter& u = inputs.add("u", 4, 1, nn::Init::kGlorot);
    testing::randomize(v, rng);
    testing::randomize(u, rng);
    auto& P = m.params();
    auto syn = [&](Graph& g) {
      return g.sum({g.segment(m.compose_syn(g, g.parameter(v), g.parameter(u), "vc"), 1, 1)});
    };
    auto sem = [&](Graph& g) {
      return g.sum({g.segment(m.compose_sem(g, g.parameter(v), g.parameter(u), "A1"), 2, 1)});
    };
    auto pred = [&](Graph& g) {
      return g.sum({g.segment(m.compose_pred(g, g.parameter(v), "reopen.01"), 0, 1)});
    };
    EXPECT_LT(check_gradients(syn, {&P.get("gs.Z"), &P.get("gs.e"), &P.get("label"), &v, &u})
                  .max_relative_error,
              kTolerance);
    EXPECT_LT(check_gradients(sem, {&P.get("gm.Z"), &P.get("gm.e"), &P.get("role"), &v, &u})
                  .max_relative_error,
              kTolerance);
    EXPECT_LT(check_gradients(pred, {&P.get("gd.Z"), &P.get("gd.e"), &P.get("sense"), &v})
                  .max_relative_error,
              kTolerance);
  }
}

TEST(ParserModel, SentenceLossGradient) {
  std::mt19937_64 rng(12);
  const Sentence s = testing::reopen_sentence();
  for (SystemMode mode : {SystemMode::kJoint, SystemMode::kSyntaxOnly, SystemMode::kSemanticsOnly}) {
    const ParserModel m = tiny_model(mode, 3);
    auto build = [&](Graph& g) { return sentence_loss(g, m, s, {}); };
    // Losses summed over ~30 steps carry finite-difference noise near 1e-9, so
    // entries below 1e-4 are compared on an absolute scale.
    const auto report = check_gradients(build, all_params(m), 1e-5, 8, &rng, 1e-4);
    EXPECT_LT(report.max_relative_error, kTolerance) << system_mode_name(mode) << " " << report.worst;
    EXPECT_GT(report.entries, 100);
  }
}

TEST(ParserModel, SerializationRoundTrip) {
  const ParserModel m = tiny_model();
  const std::string bytes = m.serialize();
  const ParserModel back = ParserModel::deserialize(bytes);
  EXPECT_EQ(back.serialize(), bytes);
  EXPECT_EQ(back.hyper(), m.hyper());
  EXPECT_THROW(ParserModel::deserialize(bytes.substr(0, bytes.size() - 3)), io::FormatError);
}

TEST(ModelIo, ContainerRejectsVersionMismatch) {
  std::stringstream good;
  io::write_container(good, {{"PRSR", "abc"}, {"PRED", ""}});
  const auto sections = io::read_container(good);
  ASSERT_EQ(sections.size(), 2u);
  EXPECT_EQ(sections[0].tag, "PRSR");
  EXPECT_EQ(sections[0].payload, "abc");

  std::string bytes = good.str();
  bytes[8] = 2;  // version field follows the magic
  std::stringstream bad(bytes);
  EXPECT_THROW(io::read_container(bad), io::FormatError);
  std::stringstream junk("not a model");
  EXPECT_THROW(io::read_container(junk), io::FormatError);
}

TEST(ModelIo, LittleEndianEncoding) {
  io::Writer w;
  w.u32(0x01020304u);
  w.f64(1.0);
  const std::string& b = w.bytes();
  ASSERT_EQ(b.size(), 12u);
  EXPECT_EQ(b[0], 4);
  EXPECT_EQ(b[3], 1);
  EXPECT_EQ(static_cast<unsigned char>(b[11]), 0x3f);
  io::Reader r(b);
  EXPECT_EQ(r.u32(), 0x01020304u);
  EXPECT_EQ(r.f64(), 1.0);
  EXPECT_TRUE(r.done());
  EXPECT_THROW(r.u8(), io::FormatError);
}

}  // namespace
}  // namespace jparse
