#include "jparse/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace jparse {
namespace {

constexpr std::size_t kFixedColumns2009 = 14;
constexpr std::size_t kFixedColumns2008 = 11;

struct ColumnLayout {
  std::size_t fixed;
  std::size_t form, lemma, pos, head, label;
  // 2009 carries an explicit FILLPRED flag; 2008 marks predicates through
  // a non-empty PRED column only.
  std::optional<std::size_t> fillpred;
  std::size_t pred;
};

ColumnLayout layout_for(CorpusFormat format) {
  if (format == CorpusFormat::kConll2009) {
    // ID FORM LEMMA PLEMMA POS PPOS FEAT PFEAT HEAD PHEAD DEPREL PDEPREL
    // FILLPRED PRED APRED...
    return {kFixedColumns2009, 1, 3, 5, 8, 10, 12, 13};
  }
  // ID FORM LEMMA GPOS PPOS SPLIT_FORM SPLIT_LEMMA PPOSS HEAD DEPREL PRED ARG...
  return {kFixedColumns2008, 1, 2, 4, 8, 9, std::nullopt, 10};
}

std::vector<std::string> split_columns(const std::string& line) {
  std::vector<std::string> columns;
  if (line.find('\t') != std::string::npos) {
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      columns.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
  } else {
    std::istringstream fields(line);
    std::string field;
    while (fields >> field) columns.push_back(field);
  }
  return columns;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::optional<int> parse_int(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

struct Row {
  std::vector<std::string> columns;
  std::size_t line;
};

Sentence parse_block(const std::vector<Row>& rows, const ColumnLayout& layout) {
  Sentence sentence;
  const int n = static_cast<int>(rows.size());
  std::vector<int> predicate_order;

  for (int i = 0; i < n; ++i) {
    const Row& row = rows[i];
    const auto& cols = row.columns;
    if (cols.size() < layout.fixed) {
      throw CorpusError("expected at least " + std::to_string(layout.fixed) +
                            " columns, found " + std::to_string(cols.size()),
                        row.line);
    }
    for (const auto& c : cols) {
      if (c.empty()) throw CorpusError("empty column", row.line);
    }
    auto id = parse_int(cols[0]);
    if (!id) throw CorpusError("token id is not an integer: " + cols[0], row.line);
    if (*id >= 1 && *id <= i) {
      throw CorpusError("multiple heads for token " + std::to_string(*id),
                        row.line);
    }
    if (*id != i + 1) {
      throw CorpusError("expected token id " + std::to_string(i + 1) +
                            ", found " + cols[0],
                        row.line);
    }

    Token token;
    token.index = i + 1;
    token.form = cols[layout.form];
    token.lemma = cols[layout.lemma];
    token.pos = cols[layout.pos];
    const std::string& pred = cols[layout.pred];
    if (layout.fillpred) {
      const std::string& flag = cols[*layout.fillpred];
      if (flag != "Y" && flag != "_") {
        throw CorpusError("FILLPRED must be Y or _, found " + flag, row.line);
      }
      token.is_predicate = flag == "Y";
      if (token.is_predicate && pred != "_") token.sense = pred;
      if (!token.is_predicate && pred != "_") {
        throw CorpusError("PRED set on a token without FILLPRED", row.line);
      }
    } else if (pred != "_") {
      token.is_predicate = true;
      token.sense = pred;
    }
    if (token.is_predicate) predicate_order.push_back(token.index);

    const std::string& head = cols[layout.head];
    if (head != "_") {
      auto h = parse_int(head);
      if (!h) throw CorpusError("head is not an integer: " + head, row.line);
      if (*h < 0 || *h > n) {
        throw CorpusError("head index " + head + " out of range [0, " +
                              std::to_string(n) + "]",
                          row.line);
      }
      sentence.syn_arcs.push_back({*h, token.index, cols[layout.label]});
    }
    sentence.tokens.push_back(std::move(token));
  }

  for (int i = 0; i < n; ++i) {
    const Row& row = rows[i];
    const std::size_t args = row.columns.size() - layout.fixed;
    if (args != predicate_order.size()) {
      throw CorpusError("expected " + std::to_string(predicate_order.size()) +
                            " argument columns, found " + std::to_string(args),
                        row.line);
    }
    for (std::size_t p = 0; p < args; ++p) {
      const std::string& role = row.columns[layout.fixed + p];
      if (role != "_") sentence.sem_arcs.push_back({predicate_order[p], i + 1, role});
    }
  }
  sentence.normalize();
  return sentence;
}

}  // namespace

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "2008" || name == "conll2008") return CorpusFormat::kConll2008;
  if (name == "2009" || name == "conll2009") return CorpusFormat::kConll2009;
  throw std::invalid_argument("unknown corpus format: " + name);
}

const char* corpus_format_name(CorpusFormat format) {
  return format == CorpusFormat::kConll2008 ? "2008" : "2009";
}

void Sentence::normalize() {
  std::sort(syn_arcs.begin(), syn_arcs.end(), [](const SynArc& a, const SynArc& b) {
    return std::tie(a.dependent, a.head, a.label) < std::tie(b.dependent, b.head, b.label);
  });
  std::sort(sem_arcs.begin(), sem_arcs.end());
}

CorpusError::CorpusError(const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message
                              : message),
      line_(line) {}

std::vector<Sentence> read_conll(std::istream& in, CorpusFormat format) {
  const ColumnLayout layout = layout_for(format);
  std::vector<Sentence> sentences;
  std::vector<Row> block;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      if (!block.empty()) sentences.push_back(parse_block(block, layout));
      block.clear();
      continue;
    }
    block.push_back({split_columns(line), line_number});
  }
  if (!block.empty()) sentences.push_back(parse_block(block, layout));
  return sentences;
}

std::vector<Sentence> read_conll(const std::filesystem::path& path,
                                 CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_conll(in, format);
}

void write_conll(std::ostream& out, std::span<const Sentence> sentences,
                 CorpusFormat format) {
  for (const Sentence& sentence : sentences) {
    std::vector<std::string> heads(sentence.size() + 1, "_");
    std::vector<std::string> labels(sentence.size() + 1, "_");
    for (const SynArc& arc : sentence.syn_arcs) {
      heads.at(arc.dependent) = std::to_string(arc.head);
      labels.at(arc.dependent) = arc.label;
    }
    std::vector<int> predicates;
    for (const Token& t : sentence.tokens) {
      if (t.is_predicate) predicates.push_back(t.index);
    }
    std::map<std::pair<int, int>, std::string> roles;
    for (const SemArc& arc : sentence.sem_arcs) {
      roles[{arc.predicate, arc.argument}] = arc.role;
    }

    for (const Token& t : sentence.tokens) {
      const std::string& head = heads[t.index];
      const std::string& label = labels[t.index];
      const std::string sense = t.sense.value_or("_");
      if (format == CorpusFormat::kConll2009) {
        out << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.lemma
            << '\t' << t.pos << '\t' << t.pos << "\t_\t_\t" << head << '\t'
            << head << '\t' << label << '\t' << label << '\t'
            << (t.is_predicate ? "Y" : "_") << '\t' << sense;
      } else {
        out << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.pos
            << '\t' << t.pos << '\t' << t.form << '\t' << t.lemma << '\t'
            << t.pos << '\t' << head << '\t' << label << '\t'
            << (t.is_predicate ? sense : std::string("_"));
      }
      for (int p : predicates) {
        auto it = roles.find({p, t.index});
        out << '\t' << (it == roles.end() ? std::string("_") : it->second);
      }
      out << '\n';
    }
    out << '\n';
  }
}

void write_conll(const std::filesystem::path& path,
                 std::span<const Sentence> sentences, CorpusFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_conll(out, sentences, format);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<int> head_vector(const Sentence& sentence) {
  std::vector<int> heads(sentence.size() + 1, -1);
  for (const SynArc& arc : sentence.syn_arcs) heads.at(arc.dependent) = arc.head;
  return heads;
}

bool is_tree(const Sentence& sentence) {
  const int n = sentence.size();
  if (static_cast<int>(sentence.syn_arcs.size()) != n) return false;
  std::vector<int> heads(n + 1, -1);
  for (const SynArc& arc : sentence.syn_arcs) {
    if (arc.dependent < 1 || arc.dependent > n || arc.head < 0 || arc.head > n) {
      return false;
    }
    if (heads[arc.dependent] != -1) return false;
    heads[arc.dependent] = arc.head;
  }
  // 0 = unvisited, 1 = on the current path, 2 = known to reach the root.
  std::vector<int> mark(n + 1, 0);
  mark[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int node = start;
    while (mark[node] == 0) {
      mark[node] = 1;
      path.push_back(node);
      node = heads[node];
    }
    if (mark[node] == 1) return false;
    for (int p : path) mark[p] = 2;
  }
  return true;
}

void validate(const Sentence& sentence) {
  const int n = sentence.size();
  for (int i = 0; i < n; ++i) {
    const Token& t = sentence.tokens[i];
    if (t.index != i + 1) throw std::invalid_argument("token indices must be 1..n");
    if (t.form.empty() || t.lemma.empty() || t.pos.empty()) {
      throw std::invalid_argument("token " + std::to_string(t.index) +
                                  " has an empty form, lemma or POS");
    }
    if (t.sense.has_value() != t.is_predicate) {
      throw std::invalid_argument("token " + std::to_string(t.index) +
                                  ": sense must be present iff the token is a predicate");
    }
  }
  if (!is_tree(sentence)) throw std::invalid_argument("syntactic arcs do not form a tree");
  std::set<std::pair<int, int>> seen;
  for (const SemArc& arc : sentence.sem_arcs) {
    if (arc.predicate < 1 || arc.predicate > n || arc.argument < 1 || arc.argument > n) {
      throw std::invalid_argument("semantic arc index out of range");
    }
    if (!sentence.token(arc.predicate).is_predicate) {
      throw std::invalid_argument("semantic arc from non-predicate token " +
                                  std::to_string(arc.predicate));
    }
    if (!seen.insert({arc.predicate, arc.argument}).second) {
      throw std::invalid_argument("two roles for one predicate-argument pair");
    }
  }
}

}  // namespace jparse
