#include "jparse/model.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "jparse/model_io.h"

namespace jparse {
namespace {

using nn::Expr;
using nn::Graph;
using nn::Init;

SystemMode parse_mode(const std::string& name) {
  for (SystemMode m : {SystemMode::kJoint, SystemMode::kSyntaxOnly, SystemMode::kSemanticsOnly}) {
    if (name == system_mode_name(m)) return m;
  }
  throw io::FormatError("unknown parser mode " + name);
}

std::vector<std::string> with_first(const std::string& first, std::set<std::string> rest) {
  rest.erase(first);
  std::vector<std::string> out{first};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::map<std::string, std::string> Hyperparameters::to_map() const {
  return {
      {"mode", system_mode_name(mode)},
      {"forced_syntax", forced_syntax ? "1" : "0"},
      {"word_dim", std::to_string(word_dim)},
      {"pos_dim", std::to_string(pos_dim)},
      {"label_dim", std::to_string(label_dim)},
      {"role_dim", std::to_string(role_dim)},
      {"sense_dim", std::to_string(sense_dim)},
      {"action_dim", std::to_string(action_dim)},
      {"composition_dim", std::to_string(composition_dim)},
      {"lstm_hidden", std::to_string(lstm_hidden)},
      {"lstm_layers", std::to_string(lstm_layers)},
      {"state_dim", std::to_string(state_dim)},
      {"pretrained_dim", std::to_string(pretrained_dim)},
  };
}

Hyperparameters Hyperparameters::from_map(const std::map<std::string, std::string>& values) {
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = values.find(key);
    if (it == values.end()) throw io::FormatError("missing hyperparameter " + key);
    return it->second;
  };
  auto integer = [&](const std::string& key) { return std::stoi(get(key)); };
  Hyperparameters h;
  h.mode = parse_mode(get("mode"));
  h.forced_syntax = get("forced_syntax") == "1";
  h.word_dim = integer("word_dim");
  h.pos_dim = integer("pos_dim");
  h.label_dim = integer("label_dim");
  h.role_dim = integer("role_dim");
  h.sense_dim = integer("sense_dim");
  h.action_dim = integer("action_dim");
  h.composition_dim = integer("composition_dim");
  h.lstm_hidden = integer("lstm_hidden");
  h.lstm_layers = integer("lstm_layers");
  h.state_dim = integer("state_dim");
  h.pretrained_dim = integer("pretrained_dim");
  return h;
}

Vocabularies Vocabularies::from_corpus(const std::vector<Sentence>& corpus,
                                       const EmbeddingTable* pretrained) {
  std::set<std::string> words, tags, labels, roles, senses;
  std::map<std::string, std::map<std::string, int>> sense_counts;
  for (const Sentence& s : corpus) {
    for (const Token& t : s.tokens) {
      words.insert(t.form);
      tags.insert(t.pos);
      if (t.sense) {
        senses.insert(*t.sense);
        ++sense_counts[t.lemma][*t.sense];
      }
    }
    for (const SynArc& a : s.syn_arcs) labels.insert(a.label);
    for (const SemArc& a : s.sem_arcs) roles.insert(a.role);
  }
  Vocabularies v;
  v.words = Vocabulary(with_first(kUnknownSymbol, words));
  v.pos = Vocabulary(with_first(kUnknownSymbol, tags));
  v.labels = Vocabulary(with_first(kUnknownSymbol, labels));
  v.roles = Vocabulary(with_first(kUnknownSymbol, roles));
  v.senses = Vocabulary(with_first(kUnknownSense, senses));
  if (pretrained) v.pretrained = Vocabulary(pretrained->words());
  for (const auto& [lemma, counts] : sense_counts) {
    std::vector<std::pair<int, std::string>> ranked;
    for (const auto& [sense, count] : counts) ranked.emplace_back(-count, sense);
    std::sort(ranked.begin(), ranked.end());
    auto& list = v.lexicon[lemma];
    for (const auto& [neg, sense] : ranked) list.push_back(sense);
  }
  return v;
}

ParserModel::ParserModel(const Hyperparameters& hyper, Vocabularies vocab)
    : hyper_(hyper), vocab_(std::move(vocab)), params_(std::make_unique<nn::ParameterSet>()) {
  build_actions();
  declare_parameters();
}

void ParserModel::build_actions() {
  kind_actions_.assign(kNumTransitionKinds, {});
  placeholder_action_.assign(kNumTransitionKinds, -1);
  auto add = [&](TransitionKind kind, const std::string& param, bool selectable) {
    const int id = static_cast<int>(actions_.size());
    actions_.push_back({{kind, param}, selectable});
    action_ids_[{kind, param}] = id;
    if (selectable) kind_actions_[static_cast<int>(kind)].push_back(id);
    return id;
  };
  for (TransitionKind kind : kAllTransitionKinds) {
    const int k = static_cast<int>(kind);
    switch (param_slot(kind)) {
      case ParamSlot::kNone:
        add(kind, "", true);
        break;
      case ParamSlot::kLabel:
      case ParamSlot::kRole: {
        const Vocabulary& v = param_slot(kind) == ParamSlot::kLabel ? vocab_.labels : vocab_.roles;
        placeholder_action_[k] = add(kind, kUnknownSymbol, false);
        for (int i = 1; i < v.size(); ++i) add(kind, v.symbol(i), true);
        break;
      }
      case ParamSlot::kSense:
        placeholder_action_[k] = add(kind, kUnknownSense, false);
        for (int i = 1; i < vocab_.senses.size(); ++i) add(kind, vocab_.senses.symbol(i), true);
        break;
    }
  }
}

void ParserModel::declare_parameters() {
  auto& p = *params_;
  const Hyperparameters& h = hyper_;
  if (h.pretrained_dim > 0) {
    pretrained_ = &p.add("pretrained", h.pretrained_dim, vocab_.pretrained.size() + 1,
                         Init::kKeep, false);
  }
  word_ = &p.add("word", h.word_dim, vocab_.words.size(), Init::kEmbedding);
  pos_ = &p.add("pos", h.pos_dim, vocab_.pos.size(), Init::kEmbedding);
  label_ = &p.add("label", h.label_dim, vocab_.labels.size(), Init::kEmbedding);
  role_ = &p.add("role", h.role_dim, vocab_.roles.size(), Init::kEmbedding);
  sense_ = &p.add("sense", h.sense_dim, vocab_.senses.size(), Init::kEmbedding);
  action_ = &p.add("action", h.action_dim, static_cast<int>(actions_.size()), Init::kEmbedding);

  const int C = h.composition_dim;
  token_W_ = &p.add("token.W", C, h.pretrained_dim + h.word_dim + h.pos_dim, Init::kGlorot);
  token_b_ = &p.add("token.b", C, 1, Init::kZero);
  root_ = &p.add("root", C, 1, Init::kEmbedding);
  Zs_ = &p.add("gs.Z", C, 2 * C + h.label_dim, Init::kGlorot);
  es_ = &p.add("gs.e", C, 1, Init::kZero);
  Zm_ = &p.add("gm.Z", C, 2 * C + h.role_dim, Init::kGlorot);
  em_ = &p.add("gm.e", C, 1, Init::kZero);
  Zd_ = &p.add("gd.Z", C, C + h.sense_dim, Init::kGlorot);
  ed_ = &p.add("gd.e", C, 1, Init::kZero);

  int stacks = 2;  // B and A
  if (uses_syntax_stack()) {
    syn_stack_ = nn::add_stack_lstm(p, "S", C, h.lstm_hidden, h.lstm_layers);
    ++stacks;
  }
  if (uses_semantic_stack()) {
    sem_stack_ = nn::add_stack_lstm(p, "M", C, h.lstm_hidden, h.lstm_layers);
    ++stacks;
  }
  buffer_stack_ = nn::add_stack_lstm(p, "B", C, h.lstm_hidden, h.lstm_layers);
  action_stack_ = nn::add_stack_lstm(p, "A", h.action_dim, h.lstm_hidden, h.lstm_layers);

  state_W_ = &p.add("state.W", h.state_dim, stacks * h.lstm_hidden, Init::kGlorot);
  state_d_ = &p.add("state.d", h.state_dim, 1, Init::kZero);
  theta_ = &p.add("theta", h.state_dim, static_cast<int>(actions_.size()), Init::kGlorot);
  q_ = &p.add("q", static_cast<int>(actions_.size()), 1, Init::kZero);
}

ParserModel ParserModel::create(const Hyperparameters& hyper, const std::vector<Sentence>& corpus,
                                const EmbeddingTable* pretrained, std::uint64_t seed) {
  const bool has_pretrained = pretrained && pretrained->size() > 0;
  Hyperparameters h = hyper;
  h.pretrained_dim = has_pretrained ? pretrained->dimension() : 0;
  ParserModel model(h, Vocabularies::from_corpus(corpus, has_pretrained ? pretrained : nullptr));
  model.params_->initialize(seed);
  if (has_pretrained) {
    auto& table = model.pretrained_->value;
    const auto n = static_cast<Eigen::Index>(pretrained->size());
    table.leftCols(n) = pretrained->vectors();
    table.col(n) = pretrained->oov_vector();
  }
  return model;
}

int ParserModel::action_id(const Transition& t) const {
  auto it = action_ids_.find(t);
  if (it != action_ids_.end()) return it->second;
  return placeholder_action_[static_cast<int>(t.kind)];
}

const std::vector<int>& ParserModel::actions_of_kind(TransitionKind kind) const {
  return kind_actions_[static_cast<int>(kind)];
}

std::vector<int> ParserModel::sense_actions(const std::string& lemma) const {
  auto it = vocab_.lexicon.find(lemma);
  if (it == vocab_.lexicon.end()) {
    return {placeholder_action_[static_cast<int>(TransitionKind::kMPred)]};
  }
  std::vector<int> ids;
  for (const std::string& sense : it->second) {
    ids.push_back(action_ids_.at({TransitionKind::kMPred, sense}));
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string ParserModel::resolve_sense(const std::string& lemma,
                                       const std::optional<std::string>& chosen) const {
  if (chosen && *chosen != kUnknownSense) return *chosen;
  auto it = vocab_.lexicon.find(lemma);
  if (it != vocab_.lexicon.end() && !chosen) return it->second.front();
  return lemma + ".01";
}

bool ParserModel::uses_stack(StackId stack) const {
  switch (stack) {
    case StackId::kSyntactic:
      return uses_syntax_stack();
    case StackId::kSemantic:
      return uses_semantic_stack();
    case StackId::kBuffer:
      return true;
  }
  return false;
}

const nn::StackLstmParams& ParserModel::stack_params(StackId stack) const {
  if (!uses_stack(stack)) throw std::logic_error("stack not used in this mode");
  switch (stack) {
    case StackId::kSyntactic:
      return syn_stack_;
    case StackId::kSemantic:
      return sem_stack_;
    case StackId::kBuffer:
      break;
  }
  return buffer_stack_;
}

Expr ParserModel::atomic(Graph& g, const Token& token, bool unknown_word) const {
  std::vector<Expr> parts;
  if (pretrained_) {
    int id = vocab_.pretrained.id(token.form);
    if (id < 0) id = vocab_.pretrained.id(lowercase(token.form));
    if (id < 0) id = vocab_.pretrained.size();  // the OOV column
    parts.push_back(g.constant(pretrained_->value.col(id)));
  }
  const int word = unknown_word ? 0 : vocab_.words.id_or(token.form, 0);
  parts.push_back(g.lookup(*word_, word));
  parts.push_back(g.lookup(*pos_, vocab_.pos.id_or(token.pos, 0)));
  return g.tanh(g.affine(*token_W_, g.concat(parts), token_b_));
}

Expr ParserModel::root(Graph& g) const { return g.parameter(*root_); }

Expr ParserModel::compose_syn(Graph& g, Expr head, Expr dependent,
                              const std::string& label) const {
  const Expr l = g.lookup(*label_, vocab_.labels.id_or(label, 0));
  return g.tanh(g.affine(*Zs_, g.concat({head, dependent, l}), es_));
}

Expr ParserModel::compose_sem(Graph& g, Expr head, Expr dependent, const std::string& role) const {
  const Expr r = g.lookup(*role_, vocab_.roles.id_or(role, 0));
  return g.tanh(g.affine(*Zm_, g.concat({head, dependent, r}), em_));
}

Expr ParserModel::compose_pred(Graph& g, Expr predicate, const std::string& sense) const {
  const Expr p = g.lookup(*sense_, vocab_.senses.id_or(sense, 0));
  return g.tanh(g.affine(*Zd_, g.concat({predicate, p}), ed_));
}

Expr ParserModel::summarize_state(Graph& g, const std::vector<Expr>& queries, double dropout,
                                  std::mt19937_64* rng) const {
  Expr x = g.concat(queries);
  if (rng && dropout > 0) x = g.dropout(x, dropout, *rng);
  return g.rectify(g.affine(*state_W_, x, state_d_));
}

Expr ParserModel::score_transitions(Graph& g, Expr y, const std::vector<int>& actions) const {
  return g.select_scores(*theta_, *q_, y, actions);
}

Expr ParserModel::action_embedding(Graph& g, int action) const {
  return g.lookup(*action_, action);
}

std::string ParserModel::serialize() const {
  io::Writer w;
  const auto hyper = hyper_.to_map();
  w.u32(static_cast<std::uint32_t>(hyper.size()));
  for (const auto& [key, value] : hyper) {
    w.str(key);
    w.str(value);
  }
  w.strings(vocab_.words.symbols());
  w.strings(vocab_.pos.symbols());
  w.strings(vocab_.labels.symbols());
  w.strings(vocab_.roles.symbols());
  w.strings(vocab_.senses.symbols());
  w.strings(vocab_.pretrained.symbols());
  w.u32(static_cast<std::uint32_t>(vocab_.lexicon.size()));
  for (const auto& [lemma, senses] : vocab_.lexicon) {
    w.str(lemma);
    w.strings(senses);
  }
  w.u32(static_cast<std::uint32_t>(actions_.size()));
  for (const Action& a : actions_) w.str(to_string(a.transition));
  const auto& all = params_->all();
  w.u32(static_cast<std::uint32_t>(all.size()));
  for (const auto& p : all) {
    w.str(p->name);
    w.matrix(p->value);
  }
  return w.bytes();
}

ParserModel ParserModel::deserialize(const std::string& payload) {
  io::Reader r(payload);
  std::map<std::string, std::string> hyper;
  for (std::uint32_t i = 0, n = r.u32(); i < n; ++i) {
    std::string key = r.str();
    hyper[key] = r.str();
  }
  Vocabularies v;
  v.words = Vocabulary(r.strings());
  v.pos = Vocabulary(r.strings());
  v.labels = Vocabulary(r.strings());
  v.roles = Vocabulary(r.strings());
  v.senses = Vocabulary(r.strings());
  v.pretrained = Vocabulary(r.strings());
  for (std::uint32_t i = 0, n = r.u32(); i < n; ++i) {
    std::string lemma = r.str();
    v.lexicon[lemma] = r.strings();
  }
  ParserModel model(Hyperparameters::from_map(hyper), std::move(v));

  const std::uint32_t num_actions = r.u32();
  if (num_actions != model.actions_.size()) throw io::FormatError("action table mismatch");
  for (const Action& a : model.actions_) {
    if (r.str() != to_string(a.transition)) throw io::FormatError("action table mismatch");
  }
  const auto& all = model.params_->all();
  if (r.u32() != all.size()) throw io::FormatError("parameter count mismatch");
  for (const auto& p : all) {
    if (r.str() != p->name) throw io::FormatError("unexpected parameter, wanted " + p->name);
    Eigen::MatrixXd m = r.matrix();
    if (m.rows() != p->value.rows() || m.cols() != p->value.cols()) {
      throw io::FormatError("shape mismatch for parameter " + p->name);
    }
    p->value = std::move(m);
  }
  if (!r.done()) throw io::FormatError("trailing bytes in parser section");
  return model;
}

}  // namespace jparse
