#include "marco/tensor.hpp"

#include <cmath>
#include <utility>

#include "marco/rng.hpp"

namespace marco {

Tensor2::Tensor2(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw ShapeError("negative tensor dimension");
}

Tensor2::Tensor2(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 0 || cols < 0) throw ShapeError("negative tensor dimension");
  if (data_.size() != static_cast<std::size_t>(rows) * cols)
    throw ShapeError("tensor data length does not match rows*cols");
}

Tensor2 Tensor2::row(std::vector<double> data) {
  int n = static_cast<int>(data.size());
  return Tensor2(1, n, std::move(data));
}

Tensor2 Tensor2::uniform(int rows, int cols, double lo, double hi, Rng& rng) {
  Tensor2 t(rows, cols);
  for (auto& v : t.data_) v = rng.uniform(lo, hi);
  return t;
}

void Tensor2::fill(double v) {
  for (auto& x : data_) x = v;
}

bool Tensor2::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Tensor2::require_finite(const std::string& what) const {
  if (!all_finite()) throw NumericError("non-finite values in " + what);
}

void Tensor2::require_shape(int rows, int cols, const std::string& what) const {
  if (rows_ != rows || cols_ != cols)
    throw ShapeError(what + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " + std::to_string(rows_) +
                     "x" + std::to_string(cols_));
}

double Tensor2::sum() const {
  double s = 0.0;
  for (double v : data_) s += v;
  return s;
}

double Tensor2::norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Tensor2 c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int l = 0; l < a.cols(); ++l) {
      double av = a.at(i, l);
      if (av == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c.at(i, j) += av * b.at(l, j);
    }
  }
  return c;
}

}  // namespace marco
