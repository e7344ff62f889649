#include "marco/nn.hpp"

#include <cmath>

namespace marco {

Mlp Mlp::make(const std::vector<int>& dims, Activation hidden_act, Head head,
              Rng& rng, const std::string& name) {
  if (dims.size() < 2) throw ShapeError("mlp needs at least one layer");
  for (int d : dims)
    if (d <= 0) throw ShapeError("mlp layer dimension must be positive");
  Mlp mlp;
  mlp.head = head;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    MlpLayer layer;
    layer.weight = Parameter(
        Tensor2::uniform(dims[l], dims[l + 1], -bound, bound, rng),
        name + ".w" + std::to_string(l));
    layer.bias =
        Parameter(Tensor2::uniform(1, dims[l + 1], -bound, bound, rng),
                  name + ".b" + std::to_string(l));
    // hidden layers use hidden_act; the last layer is linear before the head
    layer.act = (l + 2 == dims.size()) ? Activation::kIdentity : hidden_act;
    mlp.layers.push_back(std::move(layer));
  }
  return mlp;
}

std::vector<Parameter*> Mlp::params() {
  std::vector<Parameter*> out;
  for (auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const Parameter*> Mlp::params() const {
  std::vector<const Parameter*> out;
  for (const auto& l : layers) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

Value forward_mlp(Tape& tape, Mlp& mlp, Value input) {
  tape.val(input).require_finite("mlp input");
  if (tape.val(input).cols() != mlp.input_dim())
    throw ShapeError("mlp input width " +
                     std::to_string(tape.val(input).cols()) +
                     " != " + std::to_string(mlp.input_dim()));
  Value h = input;
  for (auto& layer : mlp.layers) {
    h = tape.matmul(h, tape.leaf(layer.weight));
    h = tape.add_row_broadcast(h, tape.leaf(layer.bias));
    switch (layer.act) {
      case Activation::kTanh: h = tape.tanh_op(h); break;
      case Activation::kRelu: h = tape.relu(h); break;
      case Activation::kIdentity: break;
    }
  }
  if (mlp.head == Head::kSoftmax) h = tape.softmax_rows(h);
  return h;
}

Tensor2 forward_mlp(const Mlp& mlp, const Tensor2& input) {
  input.require_finite("mlp input");
  if (input.cols() != mlp.layers.front().weight.value.rows())
    throw ShapeError("mlp input width " + std::to_string(input.cols()) +
                     " != " +
                     std::to_string(mlp.layers.front().weight.value.rows()));
  Tensor2 h = input;
  for (const auto& layer : mlp.layers) {
    Tensor2 z = matmul(h, layer.weight.value);
    for (int i = 0; i < z.rows(); ++i)
      for (int j = 0; j < z.cols(); ++j) z.at(i, j) += layer.bias.value.at(0, j);
    switch (layer.act) {
      case Activation::kTanh:
        for (auto& v : z.data()) v = std::tanh(v);
        break;
      case Activation::kRelu:
        for (auto& v : z.data()) v = v > 0.0 ? v : 0.0;
        break;
      case Activation::kIdentity: break;
    }
    h = std::move(z);
  }
  if (mlp.head == Head::kSoftmax) softmax_rows_inplace(h);
  h.require_finite("mlp output");
  return h;
}

void softmax_rows_inplace(Tensor2& t) {
  for (int i = 0; i < t.rows(); ++i) {
    double mx = t.at(i, 0);
    for (int j = 1; j < t.cols(); ++j) mx = std::max(mx, t.at(i, j));
    double denom = 0.0;
    for (int j = 0; j < t.cols(); ++j) {
      double e = std::exp(t.at(i, j) - mx);
      t.at(i, j) = e;
      denom += e;
    }
    for (int j = 0; j < t.cols(); ++j) t.at(i, j) /= denom;
  }
}

}  // namespace marco
