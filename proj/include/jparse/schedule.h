#pragma once

namespace jparse {

// Learning rate for 0-based `epoch`: initial / (1 + decay * epoch).
inline double learning_rate(double initial, double decay, int epoch) {
  return initial / (1.0 + decay * epoch);
}

}  // namespace jparse
