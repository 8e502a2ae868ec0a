#include "jparse/trainer.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "jparse/decoder.h"
#include "jparse/oracle.h"
#include "jparse/parser_run.h"
#include "jparse/projectivize.h"

namespace jparse {
namespace {

bool forced_step(const ParserModel& model, const ParserState& state) {
  return model.hyper().forced_syntax && state.phase == Phase::kSyntactic && !state.buffer.empty();
}

StateOptions training_state_options(const ParserModel& model, const Sentence& gold) {
  return {model.hyper().mode, gold_predicate_mask(gold)};
}

}  // namespace

std::set<std::string> singleton_forms(const std::vector<Sentence>& corpus) {
  std::map<std::string, int> counts;
  for (const Sentence& s : corpus) {
    for (const Token& t : s.tokens) ++counts[t.form];
  }
  std::set<std::string> out;
  for (const auto& [form, count] : counts) {
    if (count == 1) out.insert(form);
  }
  return out;
}

std::vector<bool> unknown_word_mask(const Sentence& sentence, const std::set<std::string>& singletons,
                                    double prob, std::mt19937_64& rng) {
  std::vector<bool> mask(sentence.size() + 1, false);
  if (prob <= 0) return mask;
  std::bernoulli_distribution coin(std::min(prob, 1.0));
  for (const Token& t : sentence.tokens) {
    if (singletons.count(t.form)) mask[t.index] = coin(rng);
  }
  return mask;
}

std::vector<Sentence> singleton_unking(const std::vector<Sentence>& corpus, double prob,
                                       std::uint64_t seed) {
  const std::set<std::string> singletons = singleton_forms(corpus);
  std::mt19937_64 rng(seed);
  std::vector<Sentence> out = corpus;
  for (Sentence& s : out) {
    const std::vector<bool> mask = unknown_word_mask(s, singletons, prob, rng);
    for (Token& t : s.tokens) {
      if (mask[t.index]) t.form = kUnknownSymbol;
    }
  }
  return out;
}

double dev_metric(const Hyperparameters& hyper, const Metrics& metrics) {
  if (hyper.forced_syntax) return metrics.sem_f1;
  switch (hyper.mode) {
    case SystemMode::kJoint:
      return metrics.macro_f1;
    case SystemMode::kSyntaxOnly:
      return metrics.las;
    case SystemMode::kSemanticsOnly:
      return metrics.sem_f1;
  }
  return metrics.macro_f1;
}

nn::Expr sentence_loss(nn::Graph& g, const ParserModel& model, const Sentence& gold,
                       const RunOptions& options) {
  ParserState state = initial_state(gold, training_state_options(model, gold));
  ParserRun run(model, g, gold, state, options);
  const OracleTarget target(gold);
  const std::size_t cap = transition_cap(gold.size());
  std::vector<nn::Expr> losses;
  while (!is_terminal(state)) {
    if (state.history.size() >= cap) throw std::logic_error("oracle exceeded the transition cap");
    const Transition t = target.next(state);
    if (!forced_step(model, state)) losses.push_back(run.step_loss(state, t));
    run.take(state, t);
  }
  return losses.empty() ? -1 : g.sum(losses);
}

double transition_accuracy(const ParserModel& model, const std::vector<Sentence>& corpus) {
  long correct = 0, total = 0;
  for (const Sentence& original : corpus) {
    const Sentence gold = projectivize(original).sentence;
    nn::Graph g;
    ParserState state = initial_state(gold, training_state_options(model, gold));
    ParserRun run(model, g, gold, state);
    const OracleTarget target(gold);
    while (!is_terminal(state)) {
      const Transition t = target.next(state);
      if (!forced_step(model, state)) {
        const std::vector<int> actions = run.candidate_actions(state);
        correct += run.best(actions, run.scores(actions)) == model.action_id(t);
        ++total;
      }
      run.take(state, t);
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(correct) / total;
}

std::vector<Sentence> decode_corpus(const ParserModel& model, const std::vector<Sentence>& gold) {
  std::vector<Sentence> out;
  out.reserve(gold.size());
  for (const Sentence& s : gold) {
    DecodeOptions options;
    options.candidates = gold_predicate_mask(s);
    if (model.hyper().forced_syntax) options.forced_syntax = &s;
    out.push_back(decode(model, strip_annotations(s, CorpusFormat::kConll2009), options).parse);
  }
  return out;
}

TrainResult train(const std::vector<Sentence>& corpus, const std::vector<Sentence>* dev,
                  const TrainConfig& config, const EmbeddingTable* pretrained, std::ostream* log) {
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  std::vector<Sentence> data;
  data.reserve(corpus.size());
  for (const Sentence& s : corpus) data.push_back(projectivize(s).sentence);

  TrainResult result{ParserModel::create(config.hyper, data, pretrained, config.seed), {}, -1};
  ParserModel& model = result.model;
  const std::set<std::string> singletons = singleton_forms(data);
  std::mt19937_64 rng(config.seed + 1);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double best = -1.0;
  int since_best = 0;
  std::vector<Eigen::MatrixXd> best_values;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    EpochRecord record;
    record.epoch = epoch;
    record.learning_rate = learning_rate(config.learning_rate, config.decay, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      nn::Graph g;
      RunOptions options{&rng, config.dropout,
                         unknown_word_mask(data[i], singletons, config.unknown_prob, rng)};
      const nn::Expr loss = sentence_loss(g, model, data[i], options);
      if (loss < 0) continue;
      record.loss += g.scalar(loss);
      g.backward(loss);
      model.params().sgd_step(record.learning_rate, config.clip_norm);
    }

    nlohmann::ordered_json line{{"epoch", epoch},
                                {"mode", system_mode_name(config.hyper.mode)},
                                {"forced_syntax", config.hyper.forced_syntax},
                                {"learning_rate", record.learning_rate},
                                {"loss", record.loss}};
    bool stop = false;
    if (dev) {
      const Metrics m = evaluate(*dev, decode_corpus(model, *dev));
      record.dev = m;
      record.dev_metric = dev_metric(config.hyper, m);
      line["dev"] = {{"las", m.las},
                     {"sem_precision", m.sem_precision},
                     {"sem_recall", m.sem_recall},
                     {"sem_f1", m.sem_f1},
                     {"macro_f1", m.macro_f1}};
      line["dev_metric"] = *record.dev_metric;
      if (*record.dev_metric > best) {
        best = *record.dev_metric;
        since_best = 0;
        best_values = model.params().snapshot();
        result.best_epoch = epoch;
      } else {
        ++since_best;
      }
      stop = since_best >= config.patience ||
             (config.target_metric && *record.dev_metric >= *config.target_metric);
    }
    if (log) *log << line.dump() << '\n';
    result.history.push_back(record);
    if (stop) break;
  }
  if (!best_values.empty()) model.params().restore(best_values);
  return result;
}

Pipeline train_hybrid(const std::vector<Sentence>& corpus, const std::vector<Sentence>* dev,
                      const TrainConfig& config, const EmbeddingTable* pretrained, std::ostream* log) {
  TrainConfig first = config;
  first.hyper.mode = SystemMode::kSyntaxOnly;
  first.hyper.forced_syntax = false;
  TrainResult syntax = train(corpus, dev, first, pretrained, log);

  auto with_predicted_trees = [&](const std::vector<Sentence>& gold) {
    const std::vector<Sentence> trees = decode_corpus(syntax.model, gold);
    std::vector<Sentence> out = gold;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].syn_arcs = trees[i].syn_arcs;
    return out;
  };
  const std::vector<Sentence> train_set = with_predicted_trees(corpus);
  std::optional<std::vector<Sentence>> dev_set;
  if (dev) dev_set = with_predicted_trees(*dev);

  TrainConfig second = config;
  second.hyper.mode = SystemMode::kJoint;
  second.hyper.forced_syntax = true;
  TrainResult semantics = train(train_set, dev_set ? &*dev_set : nullptr, second, pretrained, log);

  Pipeline p;
  p.variant = Variant::kHybrid;
  p.models.push_back(std::move(syntax.model));
  p.models.push_back(std::move(semantics.model));
  return p;
}

Pipeline train_pipeline(Variant variant, const std::vector<Sentence>& corpus,
                        const std::vector<Sentence>* dev, const TrainConfig& config,
                        const EmbeddingTable* pretrained, std::ostream* log) {
  if (variant == Variant::kHybrid) return train_hybrid(corpus, dev, config, pretrained, log);
  TrainConfig c = config;
  c.hyper.mode = system_mode(variant);
  c.hyper.forced_syntax = false;
  Pipeline p;
  p.variant = variant;
  p.models.push_back(train(corpus, dev, c, pretrained, log).model);
  return p;
}

}  // namespace jparse
