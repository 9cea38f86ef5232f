#pragma once

// Unblocked reference HGEMM. Correctness oracle for the layered path and
// the memory-bound baseline in benchmarks.

#include <algorithm>
#include <functional>
#include <vector>

#include "hgemm/error.hpp"
#include "hgemm/matrix.hpp"

namespace hgemm {

namespace detail {

template <class T, class U>
bool overlaps(MatrixView<T> a, MatrixView<U> b) {
  if (a.empty() || b.empty()) return false;
  const void* a0 = a.data();
  const void* a1 = a.end_address();
  const void* b0 = b.data();
  const void* b1 = b.end_address();
  const std::less<const void*> lt;
  return lt(a0, b1) && lt(b0, a1);
}

inline void check_gemm_operands(ConstQuatView a, ConstQuatView b, QuatView c) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw dimension_error("gemm: A is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", B is " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()) + ", C is " +
                          std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
  if (overlaps(c, a) || overlaps(c, b)) throw alias_error("gemm: C aliases A or B");
}

/// C <- beta C, left-multiplied. beta == 0 overwrites without reading C.
inline void scale_left(const Quaternion& beta, QuatView c) {
  if (beta == Quaternion::one()) return;
  const bool overwrite = beta == Quaternion::zero();
  for (std::size_t j = 0; j < c.cols(); ++j) {
    Quaternion* cj = c.col(j);
    for (std::size_t i = 0; i < c.rows(); ++i)
      cj[i] = overwrite ? Quaternion::zero() : hmul(beta, cj[i]);
  }
}

}  // namespace detail

/// C <- alpha A B + beta C with alpha and beta multiplied from the left.
///
/// Column sweep j -> k -> i; every update is c_ij <- c_ij + (alpha a_ik) b_kj.
/// beta == 0 never reads C, so C may hold garbage or NaN.
inline void gemm_ref(const Quaternion& alpha, ConstQuatView a, ConstQuatView b,
                     const Quaternion& beta, QuatView c) {
  detail::check_gemm_operands(a, b, c);
  const std::size_t m = c.rows(), n = c.cols(), k = a.cols();
  const bool skip_product = alpha == Quaternion::zero();
  // alpha multiplies each element of A once, from the left.
  std::vector<Quaternion> scaled;
  if (!skip_product) {
    scaled.resize(m * k);
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t i = 0; i < m; ++i) scaled[p * m + i] = hmul(alpha, a(i, p));
  }
  for (std::size_t j = 0; j < n; ++j) {
    Quaternion* cj = c.col(j);
    detail::scale_left(beta, c.block(0, j, m, 1));
    if (skip_product) continue;
    for (std::size_t p = 0; p < k; ++p) {
      const Quaternion* ap = scaled.data() + p * m;
      const Quaternion bpj = b(p, j);
      for (std::size_t i = 0; i < m; ++i) cj[i] = cj[i] + hmul(ap[i], bpj);
    }
  }
}

}  // namespace hgemm
