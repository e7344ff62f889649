#ifndef MARCO_OPTIM_HPP_
#define MARCO_OPTIM_HPP_

#include <cstdint>
#include <vector>

#include "marco/autodiff.hpp"
#include "marco/tensor.hpp"

namespace marco {

// Adam moment accumulators for a fixed parameter group.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::vector<Tensor2> m;
  std::vector<Tensor2> v;

  static AdamState init(const std::vector<Parameter*>& params);
};

// If the joint L2 norm of all gradients exceeds max_norm, scales every
// gradient so the joint norm equals max_norm. Returns the factor applied
// (1.0 when no clipping happened).
double clip_global_norm(const std::vector<Parameter*>& params,
                        double max_norm);

// One Adam update with decoupled weight decay. Deterministic given state.
void adam_step(const std::vector<Parameter*>& params, AdamState& state,
               double lr, double weight_decay);

void zero_grads(const std::vector<Parameter*>& params);

}  // namespace marco

#endif  // MARCO_OPTIM_HPP_
