#include "sbpsat/kernels.hpp"

#include <algorithm>
#include <vector>

namespace sbpsat::kernels {

namespace {

inline double closure_row(const BandedView& D, int i, const double* v) {
  const double* r = D.rows + static_cast<std::ptrdiff_t>(i) * D.block_cols;
  double s = 0.0;
  for (int j = 0; j < D.block_cols; ++j) s += r[j] * v[j];
  return s * D.inv_h;
}

// Right closure is the left one mirrored with a sign flip.
inline double closure_row_right(const BandedView& D, int i, const double* v) {
  const int ii = D.n - 1 - i;
  const double* r = D.rows + static_cast<std::ptrdiff_t>(ii) * D.block_cols;
  double s = 0.0;
  for (int j = 0; j < D.block_cols; ++j) s += r[j] * v[D.n - 1 - j];
  return -s * D.inv_h;
}

inline double interior_row(const BandedView& D, int i, const double* v) {
  double s = 0.0;
  for (int k = 1; k <= D.half_width; ++k) s += D.interior[k - 1] * (v[i + k] - v[i - k]);
  return s * D.inv_h;
}

}  // namespace

void apply_banded(const BandedView& D, const double* v, double* out, Exec exec) {
  const int n = D.n;
  const int lo = D.block;
  const int hi = n - D.block;
  for (int i = 0; i < lo; ++i) out[i] = closure_row(D, i, v);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = lo; i < hi; ++i) out[i] = interior_row(D, i, v);
  } else {
    for (int i = lo; i < hi; ++i) out[i] = interior_row(D, i, v);
  }
  for (int i = hi; i < n; ++i) out[i] = closure_row_right(D, i, v);
}

void matvec(const Matrix& A, const double* x, double* y, Exec exec) {
  const auto m = static_cast<std::ptrdiff_t>(A.rows());
  const std::size_t n = A.cols();
  auto body = [&](std::ptrdiff_t i) {
    const double* r = A.data() + i * static_cast<std::ptrdiff_t>(n);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += r[j] * x[j];
    y[i] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < m; ++i) body(i);
  }
}

void householder_left(Matrix& A, const double* u, double tau, std::size_t r0, std::size_t r1,
                      std::size_t c0, std::size_t c1, Exec exec) {
  if (c1 <= c0 || r1 <= r0) return;
  const std::size_t nc = c1 - c0;
  std::vector<double> w(nc, 0.0);
  // w_j summed over rows in ascending order in both variants.
  auto accumulate = [&](std::size_t j0, std::size_t j1) {
    for (std::size_t i = r0; i < r1; ++i) {
      const double ui = u[i - r0];
      if (ui == 0.0) continue;
      const double* a = A.data() + i * A.cols() + c0;
      for (std::size_t j = j0; j < j1; ++j) w[j] += ui * a[j];
    }
  };
  auto update = [&](std::size_t i) {
    const double f = tau * u[i - r0];
    double* a = A.data() + i * A.cols() + c0;
    for (std::size_t j = 0; j < nc; ++j) a[j] -= f * w[j];
  };
  if (exec == Exec::parallel) {
    constexpr std::ptrdiff_t chunk = 64;
    const auto nchunks = static_cast<std::ptrdiff_t>((nc + chunk - 1) / chunk);
#pragma omp parallel
    {
#pragma omp for schedule(static)
      for (std::ptrdiff_t b = 0; b < nchunks; ++b) {
        const auto j0 = static_cast<std::size_t>(b * chunk);
        accumulate(j0, std::min(nc, j0 + static_cast<std::size_t>(chunk)));
      }
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(r0); i < static_cast<std::ptrdiff_t>(r1); ++i)
        update(static_cast<std::size_t>(i));
    }
  } else {
    accumulate(0, nc);
    for (std::size_t i = r0; i < r1; ++i) update(i);
  }
}

void householder_right(Matrix& A, const double* u, double tau, std::size_t r0, std::size_t r1,
                       std::size_t c0, std::size_t c1, Exec exec) {
  if (c1 <= c0 || r1 <= r0) return;
  const std::size_t nc = c1 - c0;
  auto body = [&](std::size_t i) {
    double* a = A.data() + i * A.cols() + c0;
    double s = 0.0;
    for (std::size_t j = 0; j < nc; ++j) s += a[j] * u[j];
    const double f = tau * s;
    for (std::size_t j = 0; j < nc; ++j) a[j] -= f * u[j];
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(r0); i < static_cast<std::ptrdiff_t>(r1); ++i)
      body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = r0; i < r1; ++i) body(i);
  }
}

}  // namespace sbpsat::kernels
