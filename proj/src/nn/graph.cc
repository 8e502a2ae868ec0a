#include "jparse/nn/graph.h"

#include <cmath>
#include <stdexcept>

namespace jparse::nn {
namespace {

void check_dims(bool ok, const char* op) {
  if (!ok) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

double log1p_exp(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

Parameter& ParameterSet::add(const std::string& name, int rows, int cols, Init init,
                             bool trainable) {
  if (contains(name)) throw std::invalid_argument("duplicate parameter " + name);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = MatrixXd::Zero(rows, cols);
  p->grad = MatrixXd::Zero(rows, cols);
  p->init = init;
  p->trainable = trainable;
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter& ParameterSet::get(const std::string& name) {
  for (auto& p : params_) {
    if (p->name == name) return *p;
  }
  throw std::out_of_range("no parameter named " + name);
}

const Parameter& ParameterSet::get(const std::string& name) const {
  return const_cast<ParameterSet*>(this)->get(name);
}

bool ParameterSet::contains(const std::string& name) const {
  for (const auto& p : params_) {
    if (p->name == name) return true;
  }
  return false;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) {
    if (p->touched) p->grad.setZero();
    p->touched = false;
  }
}

void ParameterSet::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& p : params_) {
    double bound = 0.0;
    switch (p->init) {
      case Init::kKeep:
        continue;
      case Init::kZero:
        p->value.setZero();
        continue;
      case Init::kGlorot:
        bound = std::sqrt(6.0 / static_cast<double>(p->value.rows() + p->value.cols()));
        break;
      case Init::kGates:
        bound = std::sqrt(6.0 / static_cast<double>(p->value.rows() / 4 + p->value.cols()));
        break;
      case Init::kEmbedding:
        bound = std::sqrt(6.0 / static_cast<double>(p->value.rows() + 1));
        break;
    }
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index c = 0; c < p->value.cols(); ++c) {
      for (Eigen::Index r = 0; r < p->value.rows(); ++r) p->value(r, c) = dist(rng);
    }
  }
}

void ParameterSet::sgd_step(double learning_rate, double clip_norm) {
  double scale = 1.0;
  if (clip_norm > 0) {
    double sq = 0.0;
    for (const auto& p : params_) {
      if (p->touched && p->trainable) sq += p->grad.squaredNorm();
    }
    const double norm = std::sqrt(sq);
    if (norm > clip_norm) scale = clip_norm / norm;
  }
  for (auto& p : params_) {
    if (p->touched && p->trainable) p->value -= (learning_rate * scale) * p->grad;
  }
  zero_grad();
}

std::vector<MatrixXd> ParameterSet::snapshot() const {
  std::vector<MatrixXd> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p->value);
  return out;
}

void ParameterSet::restore(const std::vector<MatrixXd>& values) {
  if (values.size() != params_.size()) throw std::invalid_argument("snapshot size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) params_[i]->value = values[i];
}

Expr Graph::push(VectorXd value, std::function<void(Graph&, Expr)> backprop) {
  nodes_.push_back({std::move(value), VectorXd(), std::move(backprop)});
  return static_cast<Expr>(nodes_.size() - 1);
}

void Graph::accumulate(Parameter& p) { p.touched = true; }

Expr Graph::constant(VectorXd v) { return push(std::move(v), nullptr); }

Expr Graph::parameter(Parameter& p) {
  check_dims(p.value.cols() == 1, "parameter");
  return push(p.value.col(0), [&p](Graph& g, Expr self) {
    p.grad.col(0) += g.grad(self);
    accumulate(p);
  });
}

Expr Graph::lookup(Parameter& table, int index) {
  if (index < 0 || index >= table.value.cols()) throw std::out_of_range("lookup index");
  return push(table.value.col(index), [&table, index](Graph& g, Expr self) {
    table.grad.col(index) += g.grad(self);
    accumulate(table);
  });
}

Expr Graph::affine(Parameter& W, Expr x, Parameter* b) {
  check_dims(W.value.cols() == value(x).size(), "affine");
  VectorXd out = W.value * value(x);
  if (b) {
    check_dims(b->value.rows() == W.value.rows() && b->value.cols() == 1, "affine bias");
    out += b->value.col(0);
  }
  return push(std::move(out), [&W, x, b](Graph& g, Expr self) {
    const VectorXd& dy = g.grad(self);
    W.grad.noalias() += dy * g.value(x).transpose();
    accumulate(W);
    g.grad(x).noalias() += W.value.transpose() * dy;
    if (b) {
      b->grad.col(0) += dy;
      accumulate(*b);
    }
  });
}

Expr Graph::concat(const std::vector<Expr>& parts) {
  Eigen::Index total = 0;
  for (Expr e : parts) total += value(e).size();
  VectorXd out(total);
  Eigen::Index at = 0;
  for (Expr e : parts) {
    out.segment(at, value(e).size()) = value(e);
    at += value(e).size();
  }
  return push(std::move(out), [parts](Graph& g, Expr self) {
    Eigen::Index at = 0;
    for (Expr e : parts) {
      const Eigen::Index n = g.value(e).size();
      g.grad(e) += g.grad(self).segment(at, n);
      at += n;
    }
  });
}

Expr Graph::segment(Expr x, int start, int length) {
  check_dims(start >= 0 && start + length <= value(x).size(), "segment");
  return push(value(x).segment(start, length), [x, start, length](Graph& g, Expr self) {
    g.grad(x).segment(start, length) += g.grad(self);
  });
}

Expr Graph::add(Expr a, Expr b) {
  check_dims(value(a).size() == value(b).size(), "add");
  return push(value(a) + value(b), [a, b](Graph& g, Expr self) {
    g.grad(a) += g.grad(self);
    g.grad(b) += g.grad(self);
  });
}

Expr Graph::cwise_multiply(Expr a, Expr b) {
  check_dims(value(a).size() == value(b).size(), "cwise_multiply");
  return push(value(a).cwiseProduct(value(b)), [a, b](Graph& g, Expr self) {
    const VectorXd& dy = g.grad(self);
    g.grad(a) += dy.cwiseProduct(g.value(b));
    g.grad(b) += dy.cwiseProduct(g.value(a));
  });
}

Expr Graph::tanh(Expr x) {
  return push(value(x).array().tanh().matrix(), [x](Graph& g, Expr self) {
    const VectorXd& y = g.value(self);
    g.grad(x).array() += g.grad(self).array() * (1.0 - y.array().square());
  });
}

Expr Graph::logistic(Expr x) {
  VectorXd y = (1.0 / (1.0 + (-value(x)).array().exp())).matrix();
  return push(std::move(y), [x](Graph& g, Expr self) {
    const VectorXd& y = g.value(self);
    g.grad(x).array() += g.grad(self).array() * y.array() * (1.0 - y.array());
  });
}

Expr Graph::rectify(Expr x) {
  return push(value(x).cwiseMax(0.0), [x](Graph& g, Expr self) {
    g.grad(x).array() += (g.value(x).array() > 0.0).select(g.grad(self).array(), 0.0);
  });
}

Expr Graph::dropout(Expr x, double p, std::mt19937_64& rng) {
  if (p <= 0.0) return x;
  std::bernoulli_distribution keep(1.0 - p);
  VectorXd mask(value(x).size());
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask(i) = keep(rng) ? 1.0 / (1.0 - p) : 0.0;
  return push(value(x).cwiseProduct(mask), [x, mask](Graph& g, Expr self) {
    g.grad(x) += g.grad(self).cwiseProduct(mask);
  });
}

Expr Graph::select_scores(Parameter& theta, Parameter& q, Expr y, const std::vector<int>& rows) {
  if (rows.empty()) throw std::invalid_argument("select_scores: empty action set");
  check_dims(theta.value.rows() == value(y).size(), "select_scores");
  VectorXd out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(i) = q.value(rows[i], 0) + theta.value.col(rows[i]).dot(value(y));
  }
  return push(std::move(out), [&theta, &q, y, rows](Graph& g, Expr self) {
    const VectorXd& dy = g.grad(self);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      q.grad(rows[i], 0) += dy(i);
      theta.grad.col(rows[i]) += dy(i) * g.value(y);
      g.grad(y) += dy(i) * theta.value.col(rows[i]);
    }
    accumulate(theta);
    accumulate(q);
  });
}

Expr Graph::pick_neg_log_softmax(Expr scores, int index) {
  const VectorXd& s = value(scores);
  if (index < 0 || index >= s.size()) throw std::out_of_range("pick_neg_log_softmax index");
  const double m = s.maxCoeff();
  const double log_z = m + std::log((s.array() - m).exp().sum());
  VectorXd out(1);
  out(0) = log_z - s(index);
  return push(std::move(out), [scores, index, log_z](Graph& g, Expr self) {
    VectorXd p = (g.value(scores).array() - log_z).exp().matrix();
    p(index) -= 1.0;
    g.grad(scores) += g.grad(self)(0) * p;
  });
}

Expr Graph::binary_log_loss(Expr logit, bool label) {
  check_dims(value(logit).size() == 1, "binary_log_loss");
  const double z = value(logit)(0);
  VectorXd out(1);
  out(0) = label ? log1p_exp(-z) : log1p_exp(z);
  return push(std::move(out), [logit, label](Graph& g, Expr self) {
    const double z = g.value(logit)(0);
    const double sigma = 1.0 / (1.0 + std::exp(-z));
    g.grad(logit)(0) += g.grad(self)(0) * (sigma - (label ? 1.0 : 0.0));
  });
}

Expr Graph::sum(const std::vector<Expr>& terms) {
  VectorXd out = VectorXd::Zero(1);
  for (Expr e : terms) {
    check_dims(value(e).size() == 1, "sum");
    out(0) += value(e)(0);
  }
  return push(std::move(out), [terms](Graph& g, Expr self) {
    for (Expr e : terms) g.grad(e)(0) += g.grad(self)(0);
  });
}

void Graph::backward(Expr root) {
  check_dims(value(root).size() == 1, "backward");
  for (Node& n : nodes_) n.grad = VectorXd::Zero(n.value.size());
  nodes_[root].grad(0) = 1.0;
  for (Expr e = root; e >= 0; --e) {
    if (nodes_[e].backprop) nodes_[e].backprop(*this, e);
  }
}

}  // namespace jparse::nn
