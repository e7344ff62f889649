#ifndef MARCO_AUTODIFF_HPP_
#define MARCO_AUTODIFF_HPP_

#include <functional>
#include <string>
#include <vector>

#include "marco/tensor.hpp"

namespace marco {

// A trainable tensor. Gradients accumulate into `grad` when a Tape that
// holds a leaf for this parameter runs backward().
struct Parameter {
  Tensor2 value;
  Tensor2 grad;
  std::string name;

  Parameter() = default;
  Parameter(Tensor2 v, std::string n = "")
      : value(std::move(v)), grad(value.rows(), value.cols()),
        name(std::move(n)) {}

  void zero_grad() { grad.fill(0.0); }
  std::size_t size() const { return value.size(); }
};

// Handle to a node on a Tape.
struct Value {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode gradient tape. Nodes are created in topological order by
// the op builders below; backward() walks them in reverse. One tape per
// loss evaluation; parameters live outside the tape and receive their
// gradients through leaf() sinks.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Tracked input; after backward(), d(loss)/d(p) is accumulated into p.grad.
  Value leaf(Parameter& p);
  // Untracked input.
  Value constant(Tensor2 v);
  Value constant_scalar(double v) { return constant(Tensor2::scalar(v)); }

  const Tensor2& val(Value v) const { return nodes_[check(v)].value; }
  double scalar(Value v) const;
  // Gradient of the last backward() target w.r.t. this node.
  const Tensor2& grad_of(Value v) const { return nodes_[check(v)].grad; }
  std::size_t node_count() const { return nodes_.size(); }

  // Seeds d(loss)/d(loss)=1 and propagates. `loss` must be 1x1, else
  // ContractError. Zeroes every node gradient first, then adds leaf
  // gradients into their parameter sinks.
  void backward(Value loss);

  // ---- ops ----
  Value matmul(Value a, Value b);
  Value add(Value a, Value b);
  Value sub(Value a, Value b);
  Value mul(Value a, Value b);
  // out(r,c) = a(r,c) + rowvec(1,c) broadcast over rows.
  Value add_row_broadcast(Value a, Value rowvec);
  Value scale(Value a, double c);
  Value add_const(Value a, double c);
  Value neg(Value a) { return scale(a, -1.0); }
  Value tanh_op(Value a);
  Value relu(Value a);
  // Saturates at x = 709 so finite inputs cannot overflow to Inf.
  Value exp_op(Value a);
  // Requires strictly positive input.
  Value log_op(Value a);
  // x*log(x) with 0*log(0) := 0; requires x >= 0.
  Value xlogx(Value a);
  Value square(Value a);
  // Row-wise softmax with max-subtraction.
  Value softmax_rows(Value a);
  // Same data, new shape (row-major reinterpret).
  Value reshape(Value a, int rows, int cols);
  // Vertical concatenation.
  Value stack_rows(const std::vector<Value>& parts);
  // out(i,:) = a(idx[i],:); duplicate indices accumulate gradients.
  Value gather_rows(Value a, std::vector<int> idx);
  // out(i,0) = sum_j a(i,j)*b(i,j).
  Value row_dot(Value a, Value b);
  Value row_sum(Value a);
  Value sum(Value a);
  Value mean(Value a);
  // Gradient passes only strictly inside (lo, hi).
  Value clamp(Value a, double lo, double hi);
  // Ties route the gradient to `a`.
  Value minimum(Value a, Value b);
  Value maximum(Value a, Value b);
  // s is 1x1, expanded to rows x cols.
  Value broadcast_scalar(Value s, int rows, int cols);
  // a / s with s a 1x1 node; s must be nonzero.
  Value div_scalar(Value a, Value s);
  Value mul_scalar(Value a, Value s);
  // Value copy that blocks gradient flow.
  Value stop_grad(Value a);

 private:
  struct Node {
    Tensor2 value;
    Tensor2 grad;
    bool needs_grad = false;
    Tensor2* sink = nullptr;
    std::function<void(Tape&)> pull;
  };

  int check(Value v) const;
  Value push(Tensor2 value, bool needs_grad, std::function<void(Tape&)> pull);
  bool needs(Value v) const { return nodes_[check(v)].needs_grad; }
  Tensor2& grad_mut(int id) { return nodes_[id].grad; }

  std::vector<Node> nodes_;
};

}  // namespace marco

#endif  // MARCO_AUTODIFF_HPP_
