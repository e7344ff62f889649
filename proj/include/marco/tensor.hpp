#ifndef MARCO_TENSOR_HPP_
#define MARCO_TENSOR_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "marco/errors.hpp"

namespace marco {

class Rng;

// Dense row-major matrix of doubles. Row and column vectors are 1xN / Nx1.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(int rows, int cols, double fill = 0.0);
  Tensor2(int rows, int cols, std::vector<double> data);

  static Tensor2 zeros(int rows, int cols) { return Tensor2(rows, cols); }
  static Tensor2 full(int rows, int cols, double v) {
    return Tensor2(rows, cols, v);
  }
  static Tensor2 row(std::vector<double> data);
  static Tensor2 scalar(double v) { return Tensor2(1, 1, {v}); }
  // Entries i.i.d. uniform in [lo, hi].
  static Tensor2 uniform(int rows, int cols, double lo, double hi, Rng& rng);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Tensor2& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double v);
  bool all_finite() const;
  // Throws NumericError if any entry is NaN/Inf.
  void require_finite(const std::string& what) const;
  void require_shape(int rows, int cols, const std::string& what) const;

  double sum() const;
  // Frobenius norm.
  double norm() const;

  bool operator==(const Tensor2& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// C = A * B.
Tensor2 matmul(const Tensor2& a, const Tensor2& b);

}  // namespace marco

#endif  // MARCO_TENSOR_HPP_
