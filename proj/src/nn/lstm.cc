#include "jparse/nn/lstm.h"

#include <stdexcept>

namespace jparse::nn {

LstmLayer add_lstm_layer(ParameterSet& params, const std::string& name, int input_dim,
                         int hidden_dim) {
  LstmLayer layer;
  layer.W = &params.add(name + ".W", 4 * hidden_dim, input_dim + hidden_dim, Init::kGates);
  layer.b = &params.add(name + ".b", 4 * hidden_dim, 1, Init::kZero);
  layer.input_dim = input_dim;
  layer.hidden_dim = hidden_dim;
  return layer;
}

LstmState lstm_zero_state(Graph& g, const LstmLayer& layer) {
  return {g.zeros(layer.hidden_dim), g.zeros(layer.hidden_dim)};
}

LstmState lstm_step(Graph& g, const LstmLayer& layer, Expr x, const LstmState& prev) {
  if (g.value(x).size() != layer.input_dim) {
    throw std::invalid_argument("lstm_step: input dimension mismatch");
  }
  const int H = layer.hidden_dim;
  const Expr gates = g.affine(*layer.W, g.concat({x, prev.h}), layer.b);
  const Expr i = g.logistic(g.segment(gates, 0, H));
  const Expr f = g.logistic(g.segment(gates, H, H));
  const Expr o = g.logistic(g.segment(gates, 2 * H, H));
  const Expr cand = g.tanh(g.segment(gates, 3 * H, H));
  const Expr c = g.add(g.cwise_multiply(f, prev.c), g.cwise_multiply(i, cand));
  return {g.cwise_multiply(o, g.tanh(c)), c};
}

StackLstmParams add_stack_lstm(ParameterSet& params, const std::string& name, int input_dim,
                               int hidden_dim, int num_layers) {
  StackLstmParams out;
  out.input_dim = input_dim;
  out.hidden_dim = hidden_dim;
  for (int l = 0; l < num_layers; ++l) {
    out.layers.push_back(add_lstm_layer(params, name + ".l" + std::to_string(l),
                                        l == 0 ? input_dim : hidden_dim, hidden_dim));
  }
  out.guard = &params.add(name + ".guard", input_dim, 1, Init::kEmbedding);
  return out;
}

StackLstm::StackLstm(Graph& g, const StackLstmParams& params) : g_(g), params_(params) {
  Entry start{-1, {}};
  for (const LstmLayer& layer : params.layers) start.states.push_back(lstm_zero_state(g, layer));
  history_.push_back(std::move(start));
  top_ = 0;
  push(g.parameter(*params.guard));
  depth_ = 0;
}

void StackLstm::push(Expr x) {
  Entry next{top_, {}};
  Expr input = x;
  for (std::size_t l = 0; l < params_.layers.size(); ++l) {
    const LstmState s = lstm_step(g_, params_.layers[l], input, history_[top_].states[l]);
    next.states.push_back(s);
    input = s.h;
  }
  history_.push_back(std::move(next));
  top_ = static_cast<int>(history_.size()) - 1;
  ++depth_;
}

void StackLstm::pop() {
  if (depth_ == 0) throw std::logic_error("pop from an empty stack LSTM");
  top_ = history_[top_].parent;
  --depth_;
}

}  // namespace jparse::nn
