#include "jparse/predicate_identifier.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "support/fixtures.h"
#include "support/gradient_check.h"
#include "support/random_parse.h"

namespace jparse {
namespace {

const PidHyperparameters kTiny{4, 2, 3, 0.5};

std::vector<nn::Parameter*> all_params(const PredicateIdentifier& pid) {
  std::vector<nn::Parameter*> out;
  for (const auto& p : pid.params().all()) out.push_back(p.get());
  return out;
}

TEST(PredicateIdentifier, ZeroWeightsAreUndecided) {
  const Sentence s = testing::reopen_sentence();
  const PredicateIdentifier pid = PredicateIdentifier::create(kTiny, {s}, 1);
  for (const auto& p : pid.params().all()) p->value.setZero();
  for (double p : pid.probabilities(s)) EXPECT_DOUBLE_EQ(p, 0.5);
  const std::vector<bool> mask = pid.identify(s);
  ASSERT_EQ(mask.size(), 7u);
  for (bool b : mask) EXPECT_FALSE(b);
  nn::Graph g;
  EXPECT_NEAR(g.scalar(pid.loss(g, s)), 6 * std::log(2.0), 1e-12);
}

TEST(PredicateIdentifier, LossGradient) {
  std::mt19937_64 rng(3);
  const std::vector<Sentence> corpus = testing::synthetic_corpus(20, 2, 7, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const PredicateIdentifier pid = PredicateIdentifier::create(kTiny, corpus, trial + 1);
    for (const auto& p : pid.params().all()) testing::randomize(*p, rng, 0.5);
    const Sentence& s = corpus[trial];
    const auto report = testing::check_gradients(
        [&](nn::Graph& g) { return pid.loss(g, s); }, all_params(pid), 1e-5, 10, &rng);
    EXPECT_LT(report.max_relative_error, 1e-4) << report.worst;
  }
}

TEST(PredicateIdentifier, SerializationRoundTrip) {
  const PredicateIdentifier pid =
      PredicateIdentifier::create(kTiny, testing::synthetic_corpus(5, 3, 6, 2), 9);
  const std::string bytes = pid.serialize();
  const PredicateIdentifier back = PredicateIdentifier::deserialize(bytes);
  EXPECT_EQ(back.serialize(), bytes);
  EXPECT_EQ(back.hyper(), pid.hyper());
  const Sentence s = testing::reopen_sentence();
  EXPECT_EQ(back.probabilities(s), pid.probabilities(s));
}

TEST(PredicateIdentifier, FitsSmallCorpus) {
  // Verbs are predicates, everything else is not.
  std::mt19937_64 rng(6);
  std::vector<Sentence> corpus;
  for (int i = 0; i < 30; ++i) {
    Sentence s = testing::random_tokens(3 + i % 6, rng);
    for (Token& t : s.tokens) t.is_predicate = t.pos.rfind("VB", 0) == 0;
    corpus.push_back(s);
  }
  PidTrainConfig config;
  config.hyper = {8, 4, 8, 0.5};
  config.max_epochs = 40;
  config.patience = 40;
  std::ostringstream log;
  const PredicateIdentifier pid = train_pid(corpus, &corpus, config, &log);
  const PidScores scores = score_predicates(pid, corpus);
  EXPECT_EQ(scores.accuracy, 1.0);
  EXPECT_EQ(scores.f1, 1.0);

  std::istringstream lines(log.str());
  std::string line;
  int records = 0;
  while (std::getline(lines, line)) {
    const auto record = nlohmann::json::parse(line);
    EXPECT_TRUE(record.contains("epoch"));
    EXPECT_TRUE(record.contains("dev_f1"));
    ++records;
  }
  EXPECT_GE(records, 1);
}

}  // namespace
}  // namespace jparse
