#include "jparse/predicate_identifier.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "jparse/model.h"
#include "jparse/model_io.h"
#include "jparse/schedule.h"

namespace jparse {

using nn::Expr;
using nn::Graph;
using nn::Init;

PredicateIdentifier::PredicateIdentifier(const PidHyperparameters& hyper, Vocabulary lemmas,
                                         Vocabulary pos)
    : hyper_(hyper),
      lemmas_(std::move(lemmas)),
      pos_(std::move(pos)),
      params_(std::make_unique<nn::ParameterSet>()) {
  declare_parameters();
}

void PredicateIdentifier::declare_parameters() {
  nn::ParameterSet& p = *params_;
  lemma_ = &p.add("pid.lemma", hyper_.lemma_dim, lemmas_.size(), Init::kEmbedding);
  tag_ = &p.add("pid.pos", hyper_.pos_dim, pos_.size(), Init::kEmbedding);
  const int input = hyper_.lemma_dim + hyper_.pos_dim;
  forward_ = nn::add_lstm_layer(p, "pid.fwd", input, hyper_.hidden_dim);
  backward_ = nn::add_lstm_layer(p, "pid.bwd", input, hyper_.hidden_dim);
  out_w_ = &p.add("pid.out.W", 1, 2 * hyper_.hidden_dim, Init::kGlorot);
  out_b_ = &p.add("pid.out.b", 1, 1, Init::kZero);
}

PredicateIdentifier PredicateIdentifier::create(const PidHyperparameters& hyper,
                                                const std::vector<Sentence>& corpus,
                                                std::uint64_t seed) {
  std::set<std::string> lemmas, tags;
  for (const Sentence& s : corpus) {
    for (const Token& t : s.tokens) {
      lemmas.insert(t.lemma);
      tags.insert(t.pos);
    }
  }
  auto vocab = [](std::set<std::string> symbols) {
    symbols.erase(kUnknownSymbol);
    std::vector<std::string> list{kUnknownSymbol};
    list.insert(list.end(), symbols.begin(), symbols.end());
    return Vocabulary(list);
  };
  PredicateIdentifier pid(hyper, vocab(lemmas), vocab(tags));
  pid.params_->initialize(seed);
  return pid;
}

std::vector<Expr> PredicateIdentifier::logits(Graph& g, const Sentence& sentence) const {
  const int n = sentence.size();
  std::vector<Expr> inputs;
  for (const Token& t : sentence.tokens) {
    inputs.push_back(g.concat({g.lookup(*lemma_, lemmas_.id_or(t.lemma, 0)),
                               g.lookup(*tag_, pos_.id_or(t.pos, 0))}));
  }
  std::vector<Expr> fwd(n), bwd(n);
  nn::LstmState state = nn::lstm_zero_state(g, forward_);
  for (int i = 0; i < n; ++i) {
    state = nn::lstm_step(g, forward_, inputs[i], state);
    fwd[i] = state.h;
  }
  state = nn::lstm_zero_state(g, backward_);
  for (int i = n - 1; i >= 0; --i) {
    state = nn::lstm_step(g, backward_, inputs[i], state);
    bwd[i] = state.h;
  }
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i) out.push_back(g.affine(*out_w_, g.concat({fwd[i], bwd[i]}), out_b_));
  return out;
}

Expr PredicateIdentifier::loss(Graph& g, const Sentence& sentence) const {
  const std::vector<Expr> z = logits(g, sentence);
  std::vector<Expr> terms;
  for (int i = 0; i < sentence.size(); ++i) {
    terms.push_back(g.binary_log_loss(z[i], sentence.tokens[i].is_predicate));
  }
  return g.sum(terms);
}

std::vector<double> PredicateIdentifier::probabilities(const Sentence& sentence) const {
  Graph g;
  std::vector<double> out;
  for (Expr z : logits(g, sentence)) out.push_back(1.0 / (1.0 + std::exp(-g.scalar(z))));
  return out;
}

std::vector<bool> PredicateIdentifier::identify(const Sentence& sentence) const {
  std::vector<bool> mask(sentence.size() + 1, false);
  const std::vector<double> p = probabilities(sentence);
  for (int i = 0; i < sentence.size(); ++i) mask[i + 1] = p[i] > hyper_.threshold;
  return mask;
}

std::string PredicateIdentifier::serialize() const {
  io::Writer w;
  w.u32(static_cast<std::uint32_t>(hyper_.lemma_dim));
  w.u32(static_cast<std::uint32_t>(hyper_.pos_dim));
  w.u32(static_cast<std::uint32_t>(hyper_.hidden_dim));
  w.f64(hyper_.threshold);
  w.strings(lemmas_.symbols());
  w.strings(pos_.symbols());
  const auto& all = params_->all();
  w.u32(static_cast<std::uint32_t>(all.size()));
  for (const auto& p : all) {
    w.str(p->name);
    w.matrix(p->value);
  }
  return w.bytes();
}

PredicateIdentifier PredicateIdentifier::deserialize(const std::string& payload) {
  io::Reader r(payload);
  PidHyperparameters h;
  h.lemma_dim = static_cast<int>(r.u32());
  h.pos_dim = static_cast<int>(r.u32());
  h.hidden_dim = static_cast<int>(r.u32());
  h.threshold = r.f64();
  Vocabulary lemmas(r.strings());
  Vocabulary pos(r.strings());
  PredicateIdentifier pid(h, std::move(lemmas), std::move(pos));
  const auto& all = pid.params_->all();
  if (r.u32() != all.size()) throw io::FormatError("parameter count mismatch");
  for (const auto& p : all) {
    if (r.str() != p->name) throw io::FormatError("unexpected parameter, wanted " + p->name);
    Eigen::MatrixXd m = r.matrix();
    if (m.rows() != p->value.rows() || m.cols() != p->value.cols()) {
      throw io::FormatError("shape mismatch for parameter " + p->name);
    }
    p->value = std::move(m);
  }
  if (!r.done()) throw io::FormatError("trailing bytes in predicate section");
  return pid;
}

PidScores score_predicates(const PredicateIdentifier& pid, const std::vector<Sentence>& gold) {
  long tp = 0, fp = 0, fn = 0, correct = 0, total = 0;
  for (const Sentence& s : gold) {
    const std::vector<bool> mask = pid.identify(s);
    for (const Token& t : s.tokens) {
      const bool predicted = mask[t.index];
      tp += predicted && t.is_predicate;
      fp += predicted && !t.is_predicate;
      fn += !predicted && t.is_predicate;
      correct += predicted == t.is_predicate;
      ++total;
    }
  }
  PidScores out;
  out.precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
  out.recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
  out.f1 = out.precision + out.recall == 0
               ? 0.0
               : 2 * out.precision * out.recall / (out.precision + out.recall);
  out.accuracy = total == 0 ? 1.0 : static_cast<double>(correct) / total;
  return out;
}

PredicateIdentifier train_pid(const std::vector<Sentence>& corpus,
                              const std::vector<Sentence>* dev, const PidTrainConfig& config,
                              std::ostream* log) {
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  PredicateIdentifier pid = PredicateIdentifier::create(config.hyper, corpus, config.seed);
  std::mt19937_64 rng(config.seed + 1);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double best = -1.0;
  int since_best = 0;
  std::vector<Eigen::MatrixXd> best_values;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const double lr = learning_rate(config.learning_rate, config.decay, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t i : order) {
      if (corpus[i].tokens.empty()) continue;
      Graph g;
      const Expr l = pid.loss(g, corpus[i]);
      total += g.scalar(l);
      g.backward(l);
      pid.params().sgd_step(lr, config.clip_norm);
    }
    nlohmann::ordered_json record{{"epoch", epoch}, {"learning_rate", lr}, {"loss", total}};
    if (dev) {
      const PidScores s = score_predicates(pid, *dev);
      record["dev_f1"] = s.f1;
      record["dev_accuracy"] = s.accuracy;
      if (s.f1 > best) {
        best = s.f1;
        since_best = 0;
        best_values = pid.params().snapshot();
      } else {
        ++since_best;
      }
    }
    if (log) *log << record.dump() << '\n';
    if (dev && since_best >= config.patience) break;
  }
  if (!best_values.empty()) pid.params().restore(best_values);
  return pid;
}

}  // namespace jparse
