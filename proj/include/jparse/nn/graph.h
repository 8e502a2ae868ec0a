#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace jparse::nn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Init {
  kGlorot,     // uniform in +-sqrt(6 / (rows + cols))
  kGates,      // four stacked gate matrices, each Glorot on its own shape
  kZero,       // biases
  kEmbedding,  // uniform in +-sqrt(6 / (rows + 1)), per column
  kKeep,       // filled by the caller (e.g. pretrained vectors)
};

// A learned tensor. Gradients accumulate in `grad` until zero_grad();
// `touched` marks tensors that received gradient since then.
struct Parameter {
  std::string name;
  MatrixXd value;
  MatrixXd grad;
  Init init = Init::kGlorot;
  bool trainable = true;
  bool touched = false;
};

// Owns parameters at stable addresses, in declaration order.
class ParameterSet {
 public:
  Parameter& add(const std::string& name, int rows, int cols, Init init,
                 bool trainable = true);
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  bool contains(const std::string& name) const;

  const std::vector<std::unique_ptr<Parameter>>& all() const { return params_; }

  void zero_grad();
  // Draws every parameter not marked kKeep, in declaration order.
  void initialize(std::uint64_t seed);
  // Plain SGD on touched trainable parameters, optionally clipping the
  // global gradient norm first. Clears gradients.
  void sgd_step(double learning_rate, double clip_norm = 0.0);

  std::vector<MatrixXd> snapshot() const;
  void restore(const std::vector<MatrixXd>& values);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

using Expr = int;

// Eagerly evaluated computation graph over column vectors, with reverse-mode
// differentiation. Nodes hold their value on creation; backward() walks the
// tape once from a scalar node.
class Graph {
 public:
  const VectorXd& value(Expr e) const { return nodes_[e].value; }
  double scalar(Expr e) const { return nodes_[e].value(0); }
  std::size_t size() const { return nodes_.size(); }

  Expr constant(VectorXd v);
  Expr zeros(int dim) { return constant(VectorXd::Zero(dim)); }
  // The whole of a single-column parameter.
  Expr parameter(Parameter& p);
  // Column `index` of an embedding table.
  Expr lookup(Parameter& table, int index);

  // W x + b; b may be null.
  Expr affine(Parameter& W, Expr x, Parameter* b);
  Expr concat(const std::vector<Expr>& parts);
  Expr segment(Expr x, int start, int length);
  Expr add(Expr a, Expr b);
  Expr cwise_multiply(Expr a, Expr b);
  Expr tanh(Expr x);
  Expr logistic(Expr x);
  Expr rectify(Expr x);
  // Inverted dropout: zeroes each entry with probability p and scales the
  // survivors by 1/(1-p). Identity when p == 0.
  Expr dropout(Expr x, double p, std::mt19937_64& rng);

  // Scores q[r] + theta.col(r) . y for each r in `rows`.
  Expr select_scores(Parameter& theta, Parameter& q, Expr y, const std::vector<int>& rows);
  // -log softmax(scores)[index], a 1-vector.
  Expr pick_neg_log_softmax(Expr scores, int index);
  // Binary log-loss of a 1-vector logit against a 0/1 label.
  Expr binary_log_loss(Expr logit, bool label);
  // Sum of 1-vectors.
  Expr sum(const std::vector<Expr>& terms);

  // Accumulates d(root)/d(parameter) into every reachable Parameter::grad.
  void backward(Expr root);

 private:
  struct Node {
    VectorXd value;
    VectorXd grad;
    std::function<void(Graph&, Expr)> backprop;  // null for leaves
  };

  Expr push(VectorXd value, std::function<void(Graph&, Expr)> backprop);
  VectorXd& grad(Expr e) { return nodes_[e].grad; }
  static void accumulate(Parameter& p);

  std::vector<Node> nodes_;
};

}  // namespace jparse::nn
