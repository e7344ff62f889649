#include "marco/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace marco {

namespace {
constexpr double kExpCap = 709.0;  // largest x with exp(x) finite in f64
}

int Tape::check(Value v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size()))
    throw ContractError("value handle does not belong to this tape");
  return v.id;
}

double Tape::scalar(Value v) const {
  const Tensor2& t = val(v);
  if (t.rows() != 1 || t.cols() != 1)
    throw ContractError("scalar() on a non-1x1 node");
  return t[0];
}

Value Tape::push(Tensor2 value, bool needs_grad,
                 std::function<void(Tape&)> pull) {
  value.require_finite("op output");
  Node n;
  n.value = std::move(value);
  n.needs_grad = needs_grad;
  n.pull = needs_grad ? std::move(pull) : nullptr;
  nodes_.push_back(std::move(n));
  return Value{static_cast<int>(nodes_.size()) - 1};
}

Value Tape::leaf(Parameter& p) {
  p.value.require_finite("parameter " + p.name);
  if (!p.grad.same_shape(p.value))
    throw ShapeError("parameter gradient shape mismatch: " + p.name);
  Node n;
  n.value = p.value;
  n.needs_grad = true;
  n.sink = &p.grad;
  nodes_.push_back(std::move(n));
  return Value{static_cast<int>(nodes_.size()) - 1};
}

Value Tape::constant(Tensor2 v) {
  v.require_finite("constant");
  Node n;
  n.value = std::move(v);
  n.needs_grad = false;
  nodes_.push_back(std::move(n));
  return Value{static_cast<int>(nodes_.size()) - 1};
}

void Tape::backward(Value loss) {
  int root = check(loss);
  if (nodes_[root].value.rows() != 1 || nodes_[root].value.cols() != 1)
    throw ContractError("backward() requires a scalar (1x1) loss node");
  for (auto& n : nodes_) n.grad = Tensor2(n.value.rows(), n.value.cols());
  nodes_[root].grad[0] = 1.0;
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.needs_grad) continue;
    if (n.pull) n.pull(*this);
    if (n.sink) {
      if (!n.sink->same_shape(n.grad))
        throw ShapeError("gradient sink shape mismatch");
      for (std::size_t j = 0; j < n.grad.size(); ++j)
        (*n.sink)[j] += n.grad[j];
    }
  }
}

Value Tape::matmul(Value av, Value bv) {
  int a = check(av), b = check(bv);
  Tensor2 out = marco::matmul(nodes_[a].value, nodes_[b].value);
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(bv), [a, b, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& ta = t.nodes_[a].value;
    const Tensor2& tb = t.nodes_[b].value;
    if (t.nodes_[a].needs_grad) {
      // dA += G * B^T
      Tensor2& da = t.nodes_[a].grad;
      for (int i = 0; i < ta.rows(); ++i)
        for (int j = 0; j < tb.cols(); ++j) {
          double gv = g.at(i, j);
          if (gv == 0.0) continue;
          for (int l = 0; l < ta.cols(); ++l) da.at(i, l) += gv * tb.at(l, j);
        }
    }
    if (t.nodes_[b].needs_grad) {
      // dB += A^T * G
      Tensor2& db = t.nodes_[b].grad;
      for (int i = 0; i < ta.rows(); ++i)
        for (int l = 0; l < ta.cols(); ++l) {
          double avv = ta.at(i, l);
          if (avv == 0.0) continue;
          for (int j = 0; j < tb.cols(); ++j) db.at(l, j) += avv * g.at(i, j);
        }
    }
  });
}

Value Tape::add(Value av, Value bv) {
  int a = check(av), b = check(bv);
  const Tensor2& ta = nodes_[a].value;
  const Tensor2& tb = nodes_[b].value;
  if (!ta.same_shape(tb)) throw ShapeError("add: shape mismatch");
  Tensor2 out = ta;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += tb[i];
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(bv), [a, b, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    if (t.nodes_[a].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i) t.nodes_[a].grad[i] += g[i];
    if (t.nodes_[b].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i) t.nodes_[b].grad[i] += g[i];
  });
}

Value Tape::sub(Value av, Value bv) {
  int a = check(av), b = check(bv);
  const Tensor2& ta = nodes_[a].value;
  const Tensor2& tb = nodes_[b].value;
  if (!ta.same_shape(tb)) throw ShapeError("sub: shape mismatch");
  Tensor2 out = ta;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= tb[i];
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(bv), [a, b, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    if (t.nodes_[a].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i) t.nodes_[a].grad[i] += g[i];
    if (t.nodes_[b].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i) t.nodes_[b].grad[i] -= g[i];
  });
}

Value Tape::mul(Value av, Value bv) {
  int a = check(av), b = check(bv);
  const Tensor2& ta = nodes_[a].value;
  const Tensor2& tb = nodes_[b].value;
  if (!ta.same_shape(tb)) throw ShapeError("mul: shape mismatch");
  Tensor2 out = ta;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= tb[i];
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(bv), [a, b, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& ta2 = t.nodes_[a].value;
    const Tensor2& tb2 = t.nodes_[b].value;
    if (t.nodes_[a].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i)
        t.nodes_[a].grad[i] += g[i] * tb2[i];
    if (t.nodes_[b].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i)
        t.nodes_[b].grad[i] += g[i] * ta2[i];
  });
}

Value Tape::add_row_broadcast(Value av, Value rv) {
  int a = check(av), r = check(rv);
  const Tensor2& ta = nodes_[a].value;
  const Tensor2& tr = nodes_[r].value;
  if (tr.rows() != 1 || tr.cols() != ta.cols())
    throw ShapeError("add_row_broadcast: bias must be 1 x cols");
  Tensor2 out = ta;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out.at(i, j) += tr.at(0, j);
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(rv), [a, r, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    if (t.nodes_[a].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i) t.nodes_[a].grad[i] += g[i];
    if (t.nodes_[r].needs_grad) {
      Tensor2& gr = t.nodes_[r].grad;
      for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) gr.at(0, j) += g.at(i, j);
    }
  });
}

Value Tape::scale(Value av, double c) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v *= c;
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, c, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    for (std::size_t i = 0; i < g.size(); ++i)
      t.nodes_[a].grad[i] += c * g[i];
  });
}

Value Tape::add_const(Value av, double c) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v += c;
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    for (std::size_t i = 0; i < g.size(); ++i) t.nodes_[a].grad[i] += g[i];
  });
}

Value Tape::tanh_op(Value av) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v = std::tanh(v);
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& y = t.nodes_[id].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      t.nodes_[a].grad[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Value Tape::relu(Value av) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v = v > 0.0 ? v : 0.0;
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& x = t.nodes_[a].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > 0.0) t.nodes_[a].grad[i] += g[i];
  });
}

Value Tape::exp_op(Value av) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v = std::exp(std::min(v, kExpCap));
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& y = t.nodes_[id].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      t.nodes_[a].grad[i] += g[i] * y[i];
  });
}

Value Tape::log_op(Value av) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) {
    if (v <= 0.0) throw NumericError("log of non-positive value");
    v = std::log(v);
  }
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& x = t.nodes_[a].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      t.nodes_[a].grad[i] += g[i] / x[i];
  });
}

Value Tape::xlogx(Value av) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) {
    if (v < 0.0) throw NumericError("xlogx of negative value");
    v = v == 0.0 ? 0.0 : v * std::log(v);
  }
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& x = t.nodes_[a].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > 0.0) t.nodes_[a].grad[i] += g[i] * (std::log(x[i]) + 1.0);
  });
}

Value Tape::square(Value av) {
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v *= v;
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& x = t.nodes_[a].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      t.nodes_[a].grad[i] += 2.0 * g[i] * x[i];
  });
}

Value Tape::softmax_rows(Value av) {
  int a = check(av);
  const Tensor2& x = nodes_[a].value;
  Tensor2 out(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    double mx = x.at(i, 0);
    for (int j = 1; j < x.cols(); ++j) mx = std::max(mx, x.at(i, j));
    double denom = 0.0;
    for (int j = 0; j < x.cols(); ++j) {
      double e = std::exp(x.at(i, j) - mx);
      out.at(i, j) = e;
      denom += e;
    }
    for (int j = 0; j < x.cols(); ++j) out.at(i, j) /= denom;
  }
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& y = t.nodes_[id].value;
    Tensor2& da = t.nodes_[a].grad;
    for (int i = 0; i < g.rows(); ++i) {
      double dot = 0.0;
      for (int j = 0; j < g.cols(); ++j) dot += g.at(i, j) * y.at(i, j);
      for (int j = 0; j < g.cols(); ++j)
        da.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
    }
  });
}

Value Tape::reshape(Value av, int rows, int cols) {
  int a = check(av);
  const Tensor2& x = nodes_[a].value;
  if (static_cast<std::size_t>(rows) * cols != x.size())
    throw ShapeError("reshape: element count mismatch");
  Tensor2 out(rows, cols, x.data());
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    for (std::size_t i = 0; i < g.size(); ++i) t.nodes_[a].grad[i] += g[i];
  });
}

Value Tape::stack_rows(const std::vector<Value>& parts) {
  if (parts.empty()) throw ContractError("stack_rows: empty input");
  int cols = val(parts[0]).cols();
  int rows = 0;
  bool ng = false;
  std::vector<int> ids;
  ids.reserve(parts.size());
  for (Value p : parts) {
    int i = check(p);
    if (nodes_[i].value.cols() != cols)
      throw ShapeError("stack_rows: column mismatch");
    rows += nodes_[i].value.rows();
    ng = ng || nodes_[i].needs_grad;
    ids.push_back(i);
  }
  Tensor2 out(rows, cols);
  int r = 0;
  for (int i : ids) {
    const Tensor2& x = nodes_[i].value;
    for (int ri = 0; ri < x.rows(); ++ri, ++r)
      for (int j = 0; j < cols; ++j) out.at(r, j) = x.at(ri, j);
  }
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), ng, [ids = std::move(ids), id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    int r = 0;
    for (int i : ids) {
      Tensor2& d = t.nodes_[i].grad;
      for (int ri = 0; ri < d.rows(); ++ri, ++r)
        if (t.nodes_[i].needs_grad)
          for (int j = 0; j < g.cols(); ++j) d.at(ri, j) += g.at(r, j);
    }
  });
}

Value Tape::gather_rows(Value av, std::vector<int> idx) {
  int a = check(av);
  const Tensor2& x = nodes_[a].value;
  Tensor2 out(static_cast<int>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= x.rows())
      throw ContractError("gather_rows: index out of range");
    for (int j = 0; j < x.cols(); ++j)
      out.at(static_cast<int>(i), j) = x.at(idx[i], j);
  }
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, idx = std::move(idx), id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    Tensor2& da = t.nodes_[a].grad;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (int j = 0; j < g.cols(); ++j)
        da.at(idx[i], j) += g.at(static_cast<int>(i), j);
  });
}

Value Tape::row_dot(Value av, Value bv) {
  int a = check(av), b = check(bv);
  const Tensor2& ta = nodes_[a].value;
  const Tensor2& tb = nodes_[b].value;
  if (!ta.same_shape(tb)) throw ShapeError("row_dot: shape mismatch");
  Tensor2 out(ta.rows(), 1);
  for (int i = 0; i < ta.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < ta.cols(); ++j) s += ta.at(i, j) * tb.at(i, j);
    out.at(i, 0) = s;
  }
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(bv), [a, b, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& ta2 = t.nodes_[a].value;
    const Tensor2& tb2 = t.nodes_[b].value;
    if (t.nodes_[a].needs_grad)
      for (int i = 0; i < ta2.rows(); ++i)
        for (int j = 0; j < ta2.cols(); ++j)
          t.nodes_[a].grad.at(i, j) += g.at(i, 0) * tb2.at(i, j);
    if (t.nodes_[b].needs_grad)
      for (int i = 0; i < ta2.rows(); ++i)
        for (int j = 0; j < ta2.cols(); ++j)
          t.nodes_[b].grad.at(i, j) += g.at(i, 0) * ta2.at(i, j);
  });
}

Value Tape::row_sum(Value av) {
  int a = check(av);
  const Tensor2& x = nodes_[a].value;
  Tensor2 out(x.rows(), 1);
  for (int i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < x.cols(); ++j) s += x.at(i, j);
    out.at(i, 0) = s;
  }
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    Tensor2& da = t.nodes_[a].grad;
    for (int i = 0; i < da.rows(); ++i)
      for (int j = 0; j < da.cols(); ++j) da.at(i, j) += g.at(i, 0);
  });
}

Value Tape::sum(Value av) {
  int a = check(av);
  Tensor2 out(1, 1, {nodes_[a].value.sum()});
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, id](Tape& t) {
    double g = t.nodes_[id].grad[0];
    for (auto& d : t.nodes_[a].grad.data()) d += g;
  });
}

Value Tape::mean(Value av) {
  int a = check(av);
  const Tensor2& x = nodes_[a].value;
  if (x.size() == 0) throw ContractError("mean of empty tensor");
  double inv = 1.0 / static_cast<double>(x.size());
  Tensor2 out(1, 1, {x.sum() * inv});
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, inv, id](Tape& t) {
    double g = t.nodes_[id].grad[0] * inv;
    for (auto& d : t.nodes_[a].grad.data()) d += g;
  });
}

Value Tape::clamp(Value av, double lo, double hi) {
  if (!(lo <= hi)) throw ContractError("clamp: lo > hi");
  int a = check(av);
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v = std::min(std::max(v, lo), hi);
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av), [a, lo, hi, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& x = t.nodes_[a].value;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > lo && x[i] < hi) t.nodes_[a].grad[i] += g[i];
  });
}

Value Tape::minimum(Value av, Value bv) {
  int a = check(av), b = check(bv);
  const Tensor2& ta = nodes_[a].value;
  const Tensor2& tb = nodes_[b].value;
  if (!ta.same_shape(tb)) throw ShapeError("minimum: shape mismatch");
  Tensor2 out = ta;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(ta[i], tb[i]);
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(bv), [a, b, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& ta2 = t.nodes_[a].value;
    const Tensor2& tb2 = t.nodes_[b].value;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (ta2[i] <= tb2[i]) {
        if (t.nodes_[a].needs_grad) t.nodes_[a].grad[i] += g[i];
      } else if (t.nodes_[b].needs_grad) {
        t.nodes_[b].grad[i] += g[i];
      }
    }
  });
}

Value Tape::maximum(Value av, Value bv) {
  int a = check(av), b = check(bv);
  const Tensor2& ta = nodes_[a].value;
  const Tensor2& tb = nodes_[b].value;
  if (!ta.same_shape(tb)) throw ShapeError("maximum: shape mismatch");
  Tensor2 out = ta;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(ta[i], tb[i]);
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(bv), [a, b, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    const Tensor2& ta2 = t.nodes_[a].value;
    const Tensor2& tb2 = t.nodes_[b].value;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (ta2[i] >= tb2[i]) {
        if (t.nodes_[a].needs_grad) t.nodes_[a].grad[i] += g[i];
      } else if (t.nodes_[b].needs_grad) {
        t.nodes_[b].grad[i] += g[i];
      }
    }
  });
}

Value Tape::broadcast_scalar(Value sv, int rows, int cols) {
  int s = check(sv);
  const Tensor2& ts = nodes_[s].value;
  if (ts.rows() != 1 || ts.cols() != 1)
    throw ShapeError("broadcast_scalar: source must be 1x1");
  Tensor2 out(rows, cols, ts[0]);
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(sv), [s, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += g[i];
    t.nodes_[s].grad[0] += acc;
  });
}

Value Tape::div_scalar(Value av, Value sv) {
  int a = check(av), s = check(sv);
  const Tensor2& ts = nodes_[s].value;
  if (ts.rows() != 1 || ts.cols() != 1)
    throw ShapeError("div_scalar: divisor must be 1x1");
  double sval = ts[0];
  if (sval == 0.0) throw NumericError("div_scalar: division by zero");
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v /= sval;
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(sv), [a, s, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    double sval2 = t.nodes_[s].value[0];
    if (t.nodes_[a].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i)
        t.nodes_[a].grad[i] += g[i] / sval2;
    if (t.nodes_[s].needs_grad) {
      const Tensor2& y = t.nodes_[id].value;
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * y[i];
      t.nodes_[s].grad[0] -= acc / sval2;
    }
  });
}

Value Tape::mul_scalar(Value av, Value sv) {
  int a = check(av), s = check(sv);
  const Tensor2& ts = nodes_[s].value;
  if (ts.rows() != 1 || ts.cols() != 1)
    throw ShapeError("mul_scalar: factor must be 1x1");
  double sval = ts[0];
  Tensor2 out = nodes_[a].value;
  for (auto& v : out.data()) v *= sval;
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(av) || needs(sv), [a, s, id](Tape& t) {
    const Tensor2& g = t.nodes_[id].grad;
    double sval2 = t.nodes_[s].value[0];
    const Tensor2& x = t.nodes_[a].value;
    if (t.nodes_[a].needs_grad)
      for (std::size_t i = 0; i < g.size(); ++i)
        t.nodes_[a].grad[i] += g[i] * sval2;
    if (t.nodes_[s].needs_grad) {
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * x[i];
      t.nodes_[s].grad[0] += acc;
    }
  });
}

Value Tape::stop_grad(Value av) {
  int a = check(av);
  return constant(nodes_[a].value);
}

}  // namespace marco
