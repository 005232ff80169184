#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sbpsat {

/// Row-major dense real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  std::span<double> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }

  double trace() const;
  double max_abs() const;
  Matrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& A, const Matrix& B);
Matrix operator+(const Matrix& A, const Matrix& B);
Matrix operator-(const Matrix& A, const Matrix& B);
Matrix operator*(double s, const Matrix& A);

/// y = A x.
std::vector<double> multiply(const Matrix& A, std::span<const double> x);

/// Determinant as sign * exp(log_abs); overflow-free for large matrices.
struct LogDeterminant {
  double sign = 1.0;  // 0 when singular
  double log_abs = 0.0;
  double value() const;
};

/// LU with partial pivoting.
LogDeterminant log_determinant(Matrix A);

/// Inverse by Gauss-Jordan with partial pivoting; throws on singular input.
Matrix inverse(Matrix A);

}  // namespace sbpsat
