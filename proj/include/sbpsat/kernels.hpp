#pragma once

#include <cstddef>

#include "sbpsat/dense.hpp"

namespace sbpsat {

/// Execution policy for the hot loops.  Both variants are bit-identical:
/// parallel loops split independent output entries and never reorder a sum.
enum class Exec { serial, parallel };

namespace kernels {

/// Minimal view of a banded SBP first-derivative stencil.
struct BandedView {
  int n = 0;           // grid points
  int block = 0;       // closure rows at each end
  int block_cols = 0;  // columns touched by a closure row
  int half_width = 0;  // central stencil reaches i +- half_width
  const double* rows = nullptr;      // block x block_cols, unscaled
  const double* interior = nullptr;  // c_1..c_half_width, unscaled
  double inv_h = 1.0;
};

/// out = D v.
void apply_banded(const BandedView& D, const double* v, double* out, Exec exec);

/// y = A x.
void matvec(const Matrix& A, const double* x, double* y, Exec exec);

/// Applies I - tau u u^T from the left to rows [r0, r1) of columns [c0, c1):
/// A <- A - tau u (u^T A).  u is indexed by row offset from r0.
void householder_left(Matrix& A, const double* u, double tau, std::size_t r0, std::size_t r1,
                      std::size_t c0, std::size_t c1, Exec exec);

/// Applies I - tau u u^T from the right to rows [r0, r1) of columns [c0, c1):
/// A <- A - tau (A u) u^T.  u is indexed by column offset from c0.
void householder_right(Matrix& A, const double* u, double tau, std::size_t r0, std::size_t r1,
                       std::size_t c0, std::size_t c1, Exec exec);

}  // namespace kernels
}  // namespace sbpsat
