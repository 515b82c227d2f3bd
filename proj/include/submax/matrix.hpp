#pragma once

#include <cstddef>
#include <utility>

#include "submax/vec.hpp"

namespace submax {

// Dense row-major matrix, just enough for the quadratic objectives and the
// constraint systems used here.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // Builds an exactly symmetric matrix; gen is invoked once per (i, j) with
  // i >= j, row by row, and the value mirrored above the diagonal.
  template <typename Gen>
  static DenseMatrix symmetric_from_lower(std::size_t n, Gen&& gen) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = gen(i, j);
        m(i, j) = v;
        m(j, i) = v;
      }
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec matvec(const Vec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("matvec: length mismatch");
    Vec y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      const double* row = data_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  const Vec& data() const { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec data_;
};

// Largest absolute eigenvalue of a symmetric matrix, via shifted power
// iteration with a deterministic start vector. Throws std::invalid_argument
// on non-square or asymmetric input.
double spectral_norm(const DenseMatrix& m, double tol = 1e-10);

}  // namespace submax
