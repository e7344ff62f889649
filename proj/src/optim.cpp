#include "marco/optim.hpp"

#include <cmath>

#include "marco/errors.hpp"

namespace marco {

AdamState AdamState::init(const std::vector<Parameter*>& params) {
  AdamState s;
  s.m.reserve(params.size());
  s.v.reserve(params.size());
  for (const Parameter* p : params) {
    s.m.emplace_back(p->value.rows(), p->value.cols());
    s.v.emplace_back(p->value.rows(), p->value.cols());
  }
  return s;
}

double clip_global_norm(const std::vector<Parameter*>& params,
                        double max_norm) {
  if (!(max_norm > 0.0)) throw ContractError("clip_global_norm: max_norm <= 0");
  double sq = 0.0;
  for (const Parameter* p : params)
    for (double g : p->grad.data()) sq += g * g;
  double norm = std::sqrt(sq);
  if (norm <= max_norm) return 1.0;
  double scale = max_norm / norm;
  for (Parameter* p : params)
    for (double& g : p->grad.data()) g *= scale;
  return scale;
}

void adam_step(const std::vector<Parameter*>& params, AdamState& state,
               double lr, double weight_decay) {
  if (!(lr > 0.0)) throw ContractError("adam_step: lr must be positive");
  if (weight_decay < 0.0)
    throw ContractError("adam_step: negative weight decay");
  if (state.m.size() != params.size() || state.v.size() != params.size())
    throw ContractError("adam_step: state does not match parameter group");
  state.step += 1;
  double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    if (!p.grad.same_shape(p.value))
      throw ShapeError("adam_step: grad/param shape mismatch: " + p.name);
    Tensor2& m = state.m[i];
    Tensor2& v = state.v[i];
    if (!m.same_shape(p.value))
      throw ShapeError("adam_step: state/param shape mismatch: " + p.name);
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      double g = p.grad[j];
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g;
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g * g;
      double mhat = m[j] / bc1;
      double vhat = v[j] / bc2;
      p.value[j] -=
          lr * (mhat / (std::sqrt(vhat) + state.eps) + weight_decay * p.value[j]);
    }
    p.value.require_finite("parameter after adam step: " + p.name);
  }
}

void zero_grads(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) p->zero_grad();
}

}  // namespace marco
