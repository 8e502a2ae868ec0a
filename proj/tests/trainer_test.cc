#include "jparse/trainer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "jparse/oracle.h"
#include "support/fixtures.h"
#include "support/random_parse.h"

namespace jparse {
namespace {

TrainConfig tiny_config(SystemMode mode, int epochs) {
  TrainConfig c;
  c.hyper = testing::tiny_hyperparameters(mode);
  c.max_epochs = epochs;
  c.patience = epochs;
  return c;
}

Sentence unique_forms(int n, int offset) {
  Sentence s;
  for (int i = 1; i <= n; ++i) {
    Token t;
    t.index = i;
    t.form = "w" + std::to_string(offset + i);
    t.lemma = t.form;
    t.pos = "NN";
    s.tokens.push_back(t);
    s.syn_arcs.push_back({i == 1 ? 0 : 1, i, "dep"});
  }
  return s;
}

TEST(Schedule, InverseDecay) {
  EXPECT_DOUBLE_EQ(learning_rate(0.1, 0.1, 0), 0.1);
  EXPECT_DOUBLE_EQ(learning_rate(0.1, 0.1, 10), 0.05);
  EXPECT_DOUBLE_EQ(learning_rate(0.1, 0.1, 1), 0.1 / 1.1);
}

TEST(Unking, ProbabilityZeroIsIdentity) {
  const auto corpus = testing::synthetic_corpus(10, 3, 8, 2);
  EXPECT_EQ(singleton_unking(corpus, 0.0, 1), corpus);
}

TEST(Unking, ProbabilityOneReplacesEverySingleton) {
  std::vector<Sentence> corpus{unique_forms(5, 0), unique_forms(5, 0), unique_forms(3, 100)};
  const auto out = singleton_unking(corpus, 1.0, 1);
  EXPECT_EQ(out[0], corpus[0]);
  EXPECT_EQ(out[1], corpus[1]);
  for (const Token& t : out[2].tokens) EXPECT_EQ(t.form, kUnknownSymbol);
  EXPECT_EQ(singleton_forms(corpus).size(), 3u);
}

TEST(Unking, RateMatchesProbability) {
  const std::vector<Sentence> corpus{unique_forms(4000, 0)};
  const auto out = singleton_unking(corpus, 0.5, 3);
  const auto replaced = std::count_if(out[0].tokens.begin(), out[0].tokens.end(),
                                      [](const Token& t) { return t.form == kUnknownSymbol; });
  // Binomial(4000, 0.5): five standard deviations is about 158.
  EXPECT_NEAR(static_cast<double>(replaced), 2000.0, 160.0);
}

TEST(Trainer, DevMetricPerMode) {
  Metrics m;
  m.las = 0.7;
  m.sem_f1 = 0.5;
  m.macro_f1 = 0.6;
  Hyperparameters h;
  EXPECT_EQ(dev_metric(h, m), 0.6);
  h.mode = SystemMode::kSyntaxOnly;
  EXPECT_EQ(dev_metric(h, m), 0.7);
  h.mode = SystemMode::kSemanticsOnly;
  EXPECT_EQ(dev_metric(h, m), 0.5);
  h.mode = SystemMode::kJoint;
  h.forced_syntax = true;
  EXPECT_EQ(dev_metric(h, m), 0.5);
}

TEST(Trainer, LossDecreases) {
  const std::vector<Sentence> corpus{testing::reopen_sentence()};
  TrainConfig c = tiny_config(SystemMode::kJoint, 15);
  c.dropout = 0.0;
  c.unknown_prob = 0.0;
  const TrainResult r = train(corpus, nullptr, c);
  ASSERT_EQ(r.history.size(), 15u);
  EXPECT_LT(r.history.back().loss, r.history.front().loss);
  EXPECT_EQ(r.best_epoch, -1);
}

TEST(Trainer, Reproducible) {
  const auto corpus = testing::synthetic_corpus(4, 3, 6, 5);
  const TrainConfig c = tiny_config(SystemMode::kJoint, 3);
  std::ostringstream log_a, log_b;
  const TrainResult a = train(corpus, &corpus, c, nullptr, &log_a);
  const TrainResult b = train(corpus, &corpus, c, nullptr, &log_b);
  EXPECT_EQ(a.model.serialize(), b.model.serialize());
  EXPECT_EQ(log_a.str(), log_b.str());
  TrainConfig other = c;
  other.seed = 2;
  EXPECT_NE(train(corpus, &corpus, other).model.serialize(), a.model.serialize());
}

TEST(Trainer, KeepsBestEpochAndLogsEachEpoch) {
  const auto corpus = testing::synthetic_corpus(6, 3, 7, 8);
  const auto dev = testing::synthetic_corpus(3, 3, 7, 9);
  TrainConfig c = tiny_config(SystemMode::kJoint, 6);
  c.patience = 2;
  std::ostringstream log;
  const TrainResult r = train(corpus, &dev, c, nullptr, &log);
  ASSERT_FALSE(r.history.empty());
  double best = -1.0;
  for (const EpochRecord& e : r.history) best = std::max(best, *e.dev_metric);
  EXPECT_EQ(*r.history.at(r.best_epoch).dev_metric, best);
  const Metrics m = evaluate(dev, decode_corpus(r.model, dev));
  EXPECT_DOUBLE_EQ(dev_metric(r.model.hyper(), m), best);

  std::istringstream lines(log.str());
  std::string line;
  std::size_t records = 0;
  while (std::getline(lines, line)) {
    const auto record = nlohmann::json::parse(line);
    for (const char* key : {"epoch", "learning_rate", "loss", "dev", "dev_metric"}) {
      EXPECT_TRUE(record.contains(key)) << key;
    }
    ++records;
  }
  EXPECT_EQ(records, r.history.size());
}

TEST(Trainer, EvaluationIsDeterministic) {
  const auto corpus = testing::synthetic_corpus(4, 3, 6, 10);
  const TrainResult r = train(corpus, nullptr, tiny_config(SystemMode::kJoint, 2));
  EXPECT_EQ(transition_accuracy(r.model, corpus), transition_accuracy(r.model, corpus));
  EXPECT_EQ(decode_corpus(r.model, corpus), decode_corpus(r.model, corpus));
}

TEST(Trainer, HybridTrainsTwoStages) {
  const auto corpus = testing::synthetic_corpus(4, 3, 6, 11);
  const Pipeline p = train_pipeline(Variant::kHybrid, corpus, &corpus,
                                    tiny_config(SystemMode::kJoint, 2));
  ASSERT_EQ(p.models.size(), 2u);
  EXPECT_EQ(p.models[0].hyper().mode, SystemMode::kSyntaxOnly);
  EXPECT_FALSE(p.models[0].hyper().forced_syntax);
  EXPECT_EQ(p.models[1].hyper().mode, SystemMode::kJoint);
  EXPECT_TRUE(p.models[1].hyper().forced_syntax);
  const Sentence out =
      parse_sentence(p, strip_annotations(corpus[0], CorpusFormat::kConll2009),
                     gold_predicate_mask(corpus[0]));
  EXPECT_TRUE(is_tree(out));
}

}  // namespace
}  // namespace jparse
