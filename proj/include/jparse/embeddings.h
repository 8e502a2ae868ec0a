#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace jparse {

inline constexpr std::uint64_t kDefaultEmbeddingSeed = 1234;

// Pretrained word vectors. Every out-of-vocabulary word maps to one fixed
// vector drawn uniformly from [-0.1, 0.1] when the table is created.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(int dimension, std::vector<std::string> words,
                 Eigen::MatrixXd vectors, Eigen::VectorXd oov_vector);

  static EmbeddingTable empty();

  int dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;
  Eigen::VectorXd lookup(std::string_view word) const;

  const std::vector<std::string>& words() const { return words_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }  // one column per word
  const Eigen::VectorXd& oov_vector() const { return oov_; }

 private:
  int dimension_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd oov_;
};

// Reads lines of the form "word v1 ... vd". All lines must agree on d.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::uint64_t seed = kDefaultEmbeddingSeed);

}  // namespace jparse
