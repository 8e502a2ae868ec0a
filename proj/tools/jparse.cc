#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jparse/corpus.h"
#include "jparse/embeddings.h"
#include "jparse/evaluation.h"
#include "jparse/model_io.h"
#include "jparse/oracle.h"
#include "jparse/pipeline.h"
#include "jparse/predicate_identifier.h"
#include "jparse/projectivize.h"
#include "jparse/trainer.h"
#include "jparse/transition_system.h"

namespace {

using namespace jparse;

struct Common {
  std::string format = "2009";
  std::uint64_t seed = 1;
};

void add_format(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "CoNLL column layout")
      ->check(CLI::IsMember({"2008", "2009"}))
      ->capture_default_str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct TrainArgs {
  Common common;
  std::string train, dev, model, mode = "joint", embeddings, log;
  TrainConfig config;
};

int run_train(const TrainArgs& a) {
  const CorpusFormat format = parse_corpus_format(a.common.format);
  const auto corpus = read_conll(a.train, format);
  std::optional<std::vector<Sentence>> dev;
  if (!a.dev.empty()) dev = read_conll(a.dev, format);
  std::optional<EmbeddingTable> pretrained;
  if (!a.embeddings.empty()) pretrained = load_embeddings(a.embeddings, a.common.seed);

  TrainConfig config = a.config;
  config.seed = a.common.seed;
  std::ofstream log_file;
  if (!a.log.empty()) log_file = open_output(a.log);
  Pipeline p = train_pipeline(parse_variant(a.mode), corpus, dev ? &*dev : nullptr, config,
                              pretrained ? &*pretrained : nullptr,
                              a.log.empty() ? &std::cerr : &log_file);
  p.save(a.model);
  return 0;
}

struct PidArgs {
  Common common;
  std::string train, dev, model, log;
  PidTrainConfig config;
};

int run_pid_train(const PidArgs& a) {
  const CorpusFormat format = parse_corpus_format(a.common.format);
  const auto corpus = read_conll(a.train, format);
  std::optional<std::vector<Sentence>> dev;
  if (!a.dev.empty()) dev = read_conll(a.dev, format);
  PidTrainConfig config = a.config;
  config.seed = a.common.seed;
  std::ofstream log_file;
  if (!a.log.empty()) log_file = open_output(a.log);
  Pipeline p;
  p.identifier.emplace(train_pid(corpus, dev ? &*dev : nullptr, config,
                                 a.log.empty() ? &std::cerr : &log_file));
  p.save(a.model);
  return 0;
}

struct ParseArgs {
  Common common;
  std::string input, output, model, pid_model, mode, trace;
  int threads = 1;
};

int run_parse(const ParseArgs& a) {
  const CorpusFormat format = parse_corpus_format(a.common.format);
  Pipeline p = Pipeline::load(a.model);
  if (p.models.empty()) throw std::runtime_error(a.model + " holds no parser model");
  if (!a.mode.empty() && parse_variant(a.mode) != p.variant) {
    throw std::runtime_error("--mode " + a.mode + " does not match the model, which is " +
                             variant_name(p.variant));
  }
  if (!a.pid_model.empty()) {
    Pipeline pid = Pipeline::load(a.pid_model);
    if (!pid.identifier) throw std::runtime_error(a.pid_model + " holds no predicate identifier");
    p.identifier = std::move(pid.identifier);
  }
  std::vector<Sentence> inputs;
  for (const Sentence& s : read_conll(a.input, format)) inputs.push_back(strip_annotations(s, format));

  std::ofstream trace_file;
  if (!a.trace.empty()) trace_file = open_output(a.trace);
  const auto parsed =
      parse_all(p, inputs, format, a.threads, a.trace.empty() ? nullptr : &trace_file);
  if (a.output.empty() || a.output == "-") {
    write_conll(std::cout, parsed, format);
  } else {
    write_conll(a.output, parsed, format);
  }
  return 0;
}

struct OracleArgs {
  Common common;
  std::string input, mode = "joint";
  bool trace = false;
};

int run_oracle(const OracleArgs& a) {
  const CorpusFormat format = parse_corpus_format(a.common.format);
  const Variant variant = parse_variant(a.mode);
  if (variant == Variant::kHybrid) throw std::runtime_error("the oracle has no hybrid mode");
  const SystemMode mode = system_mode(variant);
  const auto corpus = read_conll(a.input, format);
  std::size_t exact = 0, transitions = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Sentence gold = projectivize(corpus[i]).sentence;
    const OracleResult r = to_transitions(gold, mode);
    if (i > 0) std::cout << '\n';
    if (a.trace) {
      const StateOptions options{mode, gold_predicate_mask(gold)};
      ParserState state = initial_state(gold, options);
      TraceWriter trace(std::cout, gold);
      trace.initial(state);
      for (const Transition& t : r.transitions) {
        const std::size_t syn = state.created_syn_arcs.size();
        const std::size_t sem = state.created_sem_arcs.size();
        apply(state, t);
        trace.step(state, t, syn, sem);
      }
    } else {
      for (const Transition& t : r.transitions) std::cout << to_string(t) << '\n';
    }
    exact += r.exact;
    transitions += r.transitions.size();
    if (!r.exact) std::cerr << "sentence " << i + 1 << ": not recovered exactly\n";
  }
  std::cerr << "sentences=" << corpus.size() << " exact=" << exact
            << " transitions=" << transitions << '\n';
  return 0;
}

struct EvalArgs {
  Common common;
  std::string gold, predicted;
};

int run_eval(const EvalArgs& a) {
  const CorpusFormat format = parse_corpus_format(a.common.format);
  const auto gold = read_conll(a.gold, format);
  const auto predicted = read_conll(a.predicted, format);
  if (gold.size() != predicted.size()) {
    throw std::runtime_error("gold has " + std::to_string(gold.size()) +
                             " sentences, prediction has " + std::to_string(predicted.size()));
  }
  const Metrics m = evaluate(gold, predicted);
  const std::pair<const char*, double> rows[] = {{"las", m.las},
                                                 {"sem_precision", m.sem_precision},
                                                 {"sem_recall", m.sem_recall},
                                                 {"sem_f1", m.sem_f1},
                                                 {"macro_f1", m.macro_f1}};
  std::cout << std::fixed << std::setprecision(2);
  std::cout << "metric          score\n";
  for (const auto& [name, value] : rows) {
    std::cout << std::left << std::setw(14) << name << std::right << std::setw(7) << 100 * value
              << '\n';
  }
  std::cout << '\n' << std::setprecision(6);
  for (const auto& [name, value] : rows) std::cout << name << '=' << value << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint syntactic and semantic dependency parser"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train a parser model");
  t->set_config("--config", "", "Key-value file of option defaults; flags win");
  t->add_option("--train", train.train, "Training corpus")->required()->check(CLI::ExistingFile);
  t->add_option("--dev", train.dev, "Development corpus for early stopping")
      ->check(CLI::ExistingFile);
  t->add_option("--model", train.model, "Output model file")->required();
  t->add_option("--mode", train.mode, "joint, syntax-only, semantics-only or hybrid")
      ->check(CLI::IsMember({"joint", "syntax-only", "semantics-only", "hybrid"}))
      ->capture_default_str();
  t->add_option("--embeddings", train.embeddings, "Pretrained word vectors")
      ->check(CLI::ExistingFile);
  t->add_option("--log", train.log, "Training log (JSON lines); default stderr");
  t->add_option("--seed", train.common.seed, "Random seed")->capture_default_str();
  add_format(t, train.common);
  auto& tc = train.config;
  t->add_option("--epochs", tc.max_epochs, "Maximum epochs")->capture_default_str();
  t->add_option("--patience", tc.patience, "Epochs without dev improvement")->capture_default_str();
  t->add_option("--target", tc.target_metric, "Stop once the dev metric reaches this value");
  t->add_option("--learning-rate", tc.learning_rate, "Initial learning rate")->capture_default_str();
  t->add_option("--decay", tc.decay, "Learning-rate decay")->capture_default_str();
  t->add_option("--dropout", tc.dropout, "Dropout rate")->capture_default_str();
  t->add_option("--unk-prob", tc.unknown_prob, "Singleton replacement probability")
      ->capture_default_str();
  t->add_option("--clip", tc.clip_norm, "Gradient norm clip, 0 = off")->capture_default_str();
  t->add_option("--word-dim", tc.hyper.word_dim)->capture_default_str();
  t->add_option("--pos-dim", tc.hyper.pos_dim)->capture_default_str();
  t->add_option("--label-dim", tc.hyper.label_dim)->capture_default_str();
  t->add_option("--role-dim", tc.hyper.role_dim)->capture_default_str();
  t->add_option("--sense-dim", tc.hyper.sense_dim)->capture_default_str();
  t->add_option("--action-dim", tc.hyper.action_dim)->capture_default_str();
  t->add_option("--composition-dim", tc.hyper.composition_dim)->capture_default_str();
  t->add_option("--lstm-hidden", tc.hyper.lstm_hidden)->capture_default_str();
  t->add_option("--lstm-layers", tc.hyper.lstm_layers)->capture_default_str();
  t->add_option("--state-dim", tc.hyper.state_dim)->capture_default_str();

  PidArgs pid;
  auto* pt = app.add_subcommand("pid-train", "Train the predicate identifier");
  pt->set_config("--config", "", "Key-value file of option defaults; flags win");
  pt->add_option("--train", pid.train, "Training corpus")->required()->check(CLI::ExistingFile);
  pt->add_option("--dev", pid.dev, "Development corpus")->check(CLI::ExistingFile);
  pt->add_option("--model", pid.model, "Output model file")->required();
  pt->add_option("--log", pid.log, "Training log (JSON lines); default stderr");
  pt->add_option("--seed", pid.common.seed, "Random seed")->capture_default_str();
  add_format(pt, pid.common);
  pt->add_option("--epochs", pid.config.max_epochs)->capture_default_str();
  pt->add_option("--patience", pid.config.patience)->capture_default_str();
  pt->add_option("--learning-rate", pid.config.learning_rate)->capture_default_str();
  pt->add_option("--decay", pid.config.decay)->capture_default_str();
  pt->add_option("--threshold", pid.config.hyper.threshold)->capture_default_str();
  pt->add_option("--lemma-dim", pid.config.hyper.lemma_dim)->capture_default_str();
  pt->add_option("--pos-dim", pid.config.hyper.pos_dim)->capture_default_str();
  pt->add_option("--hidden", pid.config.hyper.hidden_dim)->capture_default_str();

  ParseArgs parse;
  auto* p = app.add_subcommand("parse", "Parse a CoNLL file");
  p->set_config("--config", "", "Key-value file of option defaults; flags win");
  p->add_option("--input", parse.input, "Input corpus")->required()->check(CLI::ExistingFile);
  p->add_option("--model", parse.model, "Model file")->required()->check(CLI::ExistingFile);
  p->add_option("--pid-model", parse.pid_model, "Predicate identifier for CoNLL 2008 input")
      ->check(CLI::ExistingFile);
  p->add_option("--output", parse.output, "Output file; default stdout");
  p->add_option("--mode", parse.mode, "Expected model variant")
      ->check(CLI::IsMember({"joint", "syntax-only", "semantics-only", "hybrid"}));
  p->add_option("--threads", parse.threads, "Decoding threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  p->add_option("--trace", parse.trace, "Write a per-transition trace to this file");
  p->add_option("--seed", parse.common.seed, "Random seed (decoding is deterministic)");
  add_format(p, parse.common);

  OracleArgs oracle;
  auto* o = app.add_subcommand("oracle", "Dump oracle transition sequences");
  o->add_option("--input", oracle.input, "Gold corpus")->required()->check(CLI::ExistingFile);
  o->add_option("--mode", oracle.mode, "joint, syntax-only or semantics-only")
      ->check(CLI::IsMember({"joint", "syntax-only", "semantics-only"}))
      ->capture_default_str();
  o->add_flag("--trace", oracle.trace, "Print stack contents after every transition");
  add_format(o, oracle.common);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score a prediction against gold");
  e->add_option("gold", eval.gold, "Gold corpus")->required()->check(CLI::ExistingFile);
  e->add_option("predicted", eval.predicted, "Predicted corpus")
      ->required()
      ->check(CLI::ExistingFile);
  add_format(e, eval.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (*t) return run_train(train);
    if (*pt) return run_pid_train(pid);
    if (*p) return run_parse(parse);
    if (*o) return run_oracle(oracle);
    if (*e) return run_eval(eval);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 2;
}
