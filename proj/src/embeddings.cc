#include "jparse/embeddings.h"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "jparse/corpus.h"

namespace jparse {

EmbeddingTable::EmbeddingTable(int dimension, std::vector<std::string> words,
                               Eigen::MatrixXd vectors, Eigen::VectorXd oov_vector)
    : dimension_(dimension),
      words_(std::move(words)),
      vectors_(std::move(vectors)),
      oov_(std::move(oov_vector)) {
  if (vectors_.rows() != dimension_ || vectors_.cols() != static_cast<Eigen::Index>(words_.size()) ||
      oov_.size() != dimension_) {
    throw std::invalid_argument("embedding table shape mismatch");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_.emplace(words_[i], static_cast<int>(i));
  }
}

EmbeddingTable EmbeddingTable::empty() {
  return EmbeddingTable(0, {}, Eigen::MatrixXd(0, 0), Eigen::VectorXd(0));
}

bool EmbeddingTable::contains(std::string_view word) const {
  return index_.find(std::string(word)) != index_.end();
}

Eigen::VectorXd EmbeddingTable::lookup(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return oov_;
  return vectors_.col(it->second);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;
  int dimension = -1;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    std::string value;
    while (fields >> value) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(value, &used));
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw CorpusError("not a number: " + value, line_number);
      }
    }
    if (dimension == -1) dimension = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != dimension || dimension == 0) {
      throw CorpusError("expected " + std::to_string(dimension) + " values, found " +
                            std::to_string(values.size()),
                        line_number);
    }
    words.push_back(std::move(word));
    rows.push_back(std::move(values));
  }
  if (dimension <= 0) throw std::runtime_error("no embeddings in " + path.string());

  Eigen::MatrixXd vectors(dimension, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (int r = 0; r < dimension; ++r) vectors(r, static_cast<Eigen::Index>(c)) = rows[c][r];
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.1, 0.1);
  Eigen::VectorXd oov(dimension);
  for (int r = 0; r < dimension; ++r) oov(r) = uniform(rng);
  return EmbeddingTable(dimension, std::move(words), std::move(vectors), std::move(oov));
}

}  // namespace jparse
