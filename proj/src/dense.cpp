#include "sbpsat/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace sbpsat {

Matrix Matrix::identity(std::size_t n) {
  Matrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

Matrix Matrix::transpose() const {
  Matrix T(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
  return T;
}

Matrix operator*(const Matrix& A, const Matrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Matrix operator+(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("matrix sum: shape mismatch");
  Matrix C = A;
  for (std::size_t i = 0; i < A.rows() * A.cols(); ++i) C.data()[i] += B.data()[i];
  return C;
}

Matrix operator-(const Matrix& A, const Matrix& B) { return A + (-1.0) * B; }

Matrix operator*(double s, const Matrix& A) {
  Matrix C = A;
  for (std::size_t i = 0; i < A.rows() * A.cols(); ++i) C.data()[i] *= s;
  return C;
}

std::vector<double> multiply(const Matrix& A, std::span<const double> x) {
  if (x.size() != A.cols()) throw std::invalid_argument("matvec: length mismatch");
  std::vector<double> y(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double s = 0.0;
    auto r = A.row(i);
    for (std::size_t j = 0; j < A.cols(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

double LogDeterminant::value() const { return sign * std::exp(log_abs); }

LogDeterminant log_determinant(Matrix A) {
  if (!A.square()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = A.rows();
  LogDeterminant d;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (A(piv, k) == 0.0) return {0.0, -INFINITY};
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      d.sign = -d.sign;
    }
    const double akk = A(k, k);
    if (akk < 0) d.sign = -d.sign;
    d.log_abs += std::log(std::abs(akk));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A(i, k) / akk;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
    }
  }
  return d;
}

Matrix inverse(Matrix A) {
  if (!A.square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = A.rows();
  Matrix X = Matrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (A(piv, k) == 0.0) throw std::domain_error("inverse: singular matrix");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(A(k, j), A(piv, j));
      std::swap(X(k, j), X(piv, j));
    }
    const double akk = A(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      A(k, j) /= akk;
      X(k, j) /= akk;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = A(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) -= f * A(k, j);
        X(i, j) -= f * X(k, j);
      }
    }
  }
  return X;
}

}  // namespace sbpsat
