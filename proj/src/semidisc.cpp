#include "sbpsat/semidisc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbpsat {

namespace {

std::vector<double> sample_field(const Field& f, const Grid& g) {
  std::vector<double> v(g.points());
  for (int i = 0; i < g.points(); ++i) v[i] = f(g.x[i]);
  return v;
}

double spectral_norm_2x2(double a, double b, double c, double d) {
  const double s = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  return std::sqrt(0.5 * (s + std::sqrt(std::max(0.0, s * s - 4.0 * det * det))));
}

}  // namespace

Semidiscretization Semidiscretization::assemble(const ProblemSpec& spec, const SbpOperator& op) {
  spec.validate();
  const Grid& g = op.grid();
  if (std::abs(g.L - spec.L) > 1e-12 * spec.L) throw std::invalid_argument("assemble: grid length does not match problem");
  Semidiscretization s;
  s.op_ = op;
  s.spec_ = spec;
  s.a_ = sample_field(spec.a, g);
  s.b_ = sample_field(spec.b, g);
  s.c_ = sample_field(spec.c, g);
  s.d_ = sample_field(spec.d, g);
  s.cbar_ = sample_field(spec.cbar, g);
  s.dcbar_ = op.apply(s.cbar_);
  s.alpha0_ = -s.cbar_.front();
  s.alphaL_ = -s.cbar_.back();
  return s;
}

// out = K w, scratch holds 2 n doubles.
void Semidiscretization::apply_K(const double* w, double* out, double* scratch, Exec exec) const {
  const int n = points();
  double* Dw = scratch;
  double* cw = scratch + n;
  for (int i = 0; i < n; ++i) cw[i] = cbar_[i] * w[i];
  op_.apply({w, static_cast<std::size_t>(n)}, {Dw, static_cast<std::size_t>(n)}, exec);
  op_.apply({cw, static_cast<std::size_t>(n)}, {out, static_cast<std::size_t>(n)}, exec);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (cbar_[i] * Dw[i] + out[i] - dcbar_[i] * w[i]);
}

void Semidiscretization::rhs_homogeneous(std::span<const double> W, std::span<double> dW, Exec exec) const {
  const int n = points();
  if (W.size() != size() || dW.size() != size()) throw std::invalid_argument("rhs: state length mismatch");
  thread_local std::vector<double> scratch;
  scratch.resize(2 * static_cast<std::size_t>(n));
  const double* w1 = W.data();
  const double* w2 = W.data() + n;
  double* f1 = dW.data();
  double* f2 = dW.data() + n;
  apply_K(w1, f1, scratch.data(), exec);
  apply_K(w2, f2, scratch.data(), exec);
  auto point = [&](int i) {
    const double k1 = f1[i], k2 = f2[i];
    f1[i] = k1 + a_[i] * w1[i] + b_[i] * w2[i];
    f2[i] = -k2 + c_[i] * w1[i] + d_[i] * w2[i];
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) point(i);
  } else {
    for (int i = 0; i < n; ++i) point(i);
  }
  const auto H = op_.weights();
  f2[0] += alpha0_ / H[0] * (w2[0] - spec_.R0 * w1[0]);
  f1[n - 1] += alphaL_ / H[n - 1] * (w1[n - 1] - spec_.RL * w2[n - 1]);
}

void Semidiscretization::rhs(std::span<const double> W, double t, std::span<double> dW, Exec exec) const {
  rhs_homogeneous(W, dW, exec);
  const int n = points();
  const auto H = op_.weights();
  const auto& data = spec_.data;
  if (data.h0) dW[n] -= alpha0_ / H[0] * data.h0(t);
  if (data.hL) dW[n - 1] -= alphaL_ / H[n - 1] * data.hL(t);
  if (data.forcing) {
    const auto& x = op_.grid().x;
    for (int i = 0; i < n; ++i) {
      const auto F = data.forcing(x[i], t);
      dW[i] += F[0];
      dW[n + i] += F[1];
    }
  }
}

StateVector Semidiscretization::rhs(const StateVector& W) const {
  W.check(static_cast<std::size_t>(points()));
  StateVector out(W.points, W.t);
  rhs(W.values, W.t, out.values);
  return out;
}

Matrix Semidiscretization::lambda_d() const {
  const int n = points();
  const Matrix D = op_.dense();
  Matrix L(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double k = 0.5 * (cbar_[i] + cbar_[j]) * D(i, j);
      if (i == j) k -= 0.5 * dcbar_[i];
      L(i, j) = -k;
      L(n + i, n + j) = k;
    }
  return L;
}

Matrix Semidiscretization::btilde() const {
  const int n = points();
  Matrix B(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    B(i, i) = a_[i];
    B(i, n + i) = b_[i];
    B(n + i, i) = c_[i];
    B(n + i, n + i) = d_[i];
  }
  return B;
}

Matrix Semidiscretization::penalty() const {
  const int n = points();
  const auto H = op_.weights();
  Matrix P(2 * n, 2 * n);
  const double s0 = alpha0_ / H[0];
  const double sL = alphaL_ / H[n - 1];
  P(n, n) = s0;
  if (spec_.R0 != 0.0) P(n, 0) = -s0 * spec_.R0;
  P(n - 1, n - 1) = sL;
  if (spec_.RL != 0.0) P(n - 1, 2 * n - 1) = -sL * spec_.RL;
  return P;
}

Matrix Semidiscretization::m_cbar() const {
  const int n = points();
  Matrix M(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    M(i, i) = -dcbar_[i];
    M(n + i, n + i) = dcbar_[i];
  }
  return M;
}

Matrix Semidiscretization::system_matrix() const {
  Matrix A = (-1.0) * lambda_d();
  const int n = points();
  for (int i = 0; i < n; ++i) {
    A(i, i) += a_[i];
    A(i, n + i) += b_[i];
    A(n + i, i) += c_[i];
    A(n + i, n + i) += d_[i];
  }
  const Matrix P = penalty();
  A(n, n) += P(n, n);
  A(n, 0) += P(n, 0);
  A(n - 1, n - 1) += P(n - 1, n - 1);
  A(n - 1, 2 * n - 1) += P(n - 1, 2 * n - 1);
  return A;
}

double Semidiscretization::energy(const StateVector& W) const { return inner_product_H(op_, W, W); }

double Semidiscretization::energy_rate(const StateVector& W) const { return 2.0 * inner_product_H(op_, W, rhs(W)); }

double Semidiscretization::norm_btilde_H() const {
  double m = 0.0;
  for (int i = 0; i < points(); ++i) m = std::max(m, spectral_norm_2x2(a_[i], b_[i], c_[i], d_[i]));
  return m;
}

double Semidiscretization::norm_mcbar_H() const {
  double m = 0.0;
  for (double v : dcbar_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace sbpsat
