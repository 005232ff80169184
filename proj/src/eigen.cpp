#include <algorithm>
#include <cmath>
#include <string>

#include "sbpsat/kernels.hpp"
#include "sbpsat/spectra.hpp"

namespace sbpsat {

EigenNonConvergence::EigenNonConvergence(std::size_t lo, std::size_t hi, int iterations)
    : std::runtime_error("QR iteration did not converge for active block [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "] after " + std::to_string(iterations) + " iterations"),
      block_lo(lo),
      block_hi(hi) {}

namespace {

// Power-of-two diagonal similarity scaling (row/column norm equilibration).
void balance(Matrix& A) {
  const std::size_t n = A.rows();
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) A(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) A(j, i) *= f;
      }
    }
  }
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace

void hessenberg_reduce(Matrix& A, Exec exec) {
  const std::size_t n = A.rows();
  if (n < 3) return;
  std::vector<double> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the column segment below the diagonal
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(A(k + 1 + i, k)));
    if (scale == 0.0) continue;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = A(k + 1 + i, k) / scale;
      norm2 += v[i] * v[i];
    }
    const double norm = std::sqrt(norm2);
    const double alpha = v[0] >= 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vv = norm2 - 2.0 * alpha * (v[0] + alpha) + alpha * alpha;
    if (vv == 0.0) continue;
    const double tau = 2.0 / vv;
    kernels::householder_left(A, v.data(), tau, k + 1, n, k + 1, n, exec);
    kernels::householder_right(A, v.data(), tau, 0, n, k + 1, n, exec);
    A(k + 1, k) = alpha * scale;
    for (std::size_t i = k + 2; i < n; ++i) A(i, k) = 0.0;
  }
}

std::vector<cplx> hessenberg_eigenvalues(Matrix& H, int max_iterations_per_eigenvalue) {
  const int n = static_cast<int>(H.rows());
  std::vector<double> wr(n + 1), wi(n + 1);
  // 1-based accessor keeps the classical indexing of the algorithm.
  auto a = [&H](int i, int j) -> double& { return H(i - 1, j - 1); };

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = std::max(i - 1, 1); j <= n; ++j) anorm += std::abs(a(i, j));

  int nn = n;
  double t = 0.0;
  int l = 1;
  while (nn >= 1) {
    int its = 0;
    do {
      for (l = nn; l >= 2; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) + s == s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn] = z;
            wi[nn - 1] = -z;
          }
          nn -= 2;
        } else {
          if (its == max_iterations_per_eigenvalue)
            throw EigenNonConvergence(static_cast<std::size_t>(l - 1), static_cast<std::size_t>(nn - 1), its);
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += x;
            for (int i = 1; i <= nn; ++i) a(i, i) -= x;
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0, q = 0, r = 0, z;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
  std::vector<cplx> ev(n);
  for (int i = 1; i <= n; ++i) ev[i - 1] = cplx(wr[i], wi[i]);
  return ev;
}

std::vector<cplx> eigenvalues_dense(Matrix A, const EigenOptions& opt) {
  if (!A.square()) throw std::invalid_argument("eigenvalues of a non-square matrix");
  for (std::size_t i = 0; i < A.rows() * A.cols(); ++i)
    if (!std::isfinite(A.data()[i])) throw std::invalid_argument("eigenvalues: non-finite matrix entry");
  if (A.rows() == 0) return {};
  if (opt.balance) balance(A);
  hessenberg_reduce(A, opt.exec);
  return hessenberg_eigenvalues(A, opt.max_iterations_per_eigenvalue);
}

}  // namespace sbpsat
