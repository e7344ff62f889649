#ifndef MARCO_NN_HPP_
#define MARCO_NN_HPP_

#include <string>
#include <vector>

#include "marco/autodiff.hpp"
#include "marco/rng.hpp"
#include "marco/tensor.hpp"

namespace marco {

enum class Activation { kTanh, kRelu, kIdentity };
enum class Head { kLinear, kSoftmax };

struct MlpLayer {
  Parameter weight;  // in x out
  Parameter bias;    // 1 x out
  Activation act = Activation::kIdentity;
};

// Fully connected stack. Weights and biases are initialized uniformly in
// [-1/sqrt(fan_in), +1/sqrt(fan_in)] from the caller's RNG.
struct Mlp {
  std::vector<MlpLayer> layers;
  Head head = Head::kLinear;

  static Mlp make(const std::vector<int>& dims, Activation hidden_act,
                  Head head, Rng& rng, const std::string& name = "mlp");

  int input_dim() const { return layers.front().weight.value.rows(); }
  int output_dim() const { return layers.back().weight.value.cols(); }
  std::vector<Parameter*> params();
  std::vector<const Parameter*> params() const;
  std::size_t param_count() const;
};

// Tracked forward pass; gradients flow to the Mlp parameters.
Value forward_mlp(Tape& tape, Mlp& mlp, Value input);
// Untracked forward pass on plain data.
Tensor2 forward_mlp(const Mlp& mlp, const Tensor2& input);

// Numeric row-wise softmax with max-subtraction (shared by the untracked
// paths and the data-side attention).
void softmax_rows_inplace(Tensor2& t);

}  // namespace marco

#endif  // MARCO_NN_HPP_
