#pragma once

#include <string>
#include <vector>

#include "jparse/nn/graph.h"

namespace jparse::nn {

// One LSTM layer. W stacks the input, forget, output and candidate blocks
// (4H x (X+H)) applied to [x; h_prev]; no peephole connections.
struct LstmLayer {
  Parameter* W = nullptr;
  Parameter* b = nullptr;
  int input_dim = 0;
  int hidden_dim = 0;
};

LstmLayer add_lstm_layer(ParameterSet& params, const std::string& name, int input_dim,
                         int hidden_dim);

struct LstmState {
  Expr h = -1;
  Expr c = -1;
};

LstmState lstm_zero_state(Graph& g, const LstmLayer& layer);

// c = f*c_prev + i*g,  h = o*tanh(c).
LstmState lstm_step(Graph& g, const LstmLayer& layer, Expr x, const LstmState& prev);

struct StackLstmParams {
  std::vector<LstmLayer> layers;
  Parameter* guard = nullptr;  // pushed below every stack as its empty marker
  int input_dim = 0;
  int hidden_dim = 0;
};

StackLstmParams add_stack_lstm(ParameterSet& params, const std::string& name, int input_dim,
                               int hidden_dim, int num_layers);

// An LSTM over the current stack contents. Pushing runs one step from the
// state at the top; popping moves the top back to the state it was pushed
// from, so query() afterwards returns that earlier node unchanged.
class StackLstm {
 public:
  StackLstm(Graph& g, const StackLstmParams& params);

  void push(Expr x);
  void pop();  // throws std::logic_error on an empty stack
  Expr query() const { return history_[top_].states.back().h; }
  std::size_t size() const { return depth_; }

 private:
  struct Entry {
    int parent;
    std::vector<LstmState> states;  // one per layer
  };

  Graph& g_;
  const StackLstmParams& params_;
  std::vector<Entry> history_;
  int top_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace jparse::nn
