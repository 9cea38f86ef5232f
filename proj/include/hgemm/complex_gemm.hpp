#pragma once

// Complex GEMM baselines on embedded operands: an unblocked triple loop
// (the correctness oracle) and a cache-blocked variant used as the timing
// baseline. Both compute C <- A B (+ C when `accumulate`).

#include <algorithm>
#include <complex>

#include "hgemm/error.hpp"
#include "hgemm/matrix.hpp"

#if defined(HGEMM_WITH_CBLAS)
#include <cblas.h>
#endif

namespace hgemm {

namespace detail {
inline void check_complex_dims(ConstComplexView a, ConstComplexView b, ComplexView c) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw dimension_error("complex gemm: operand shapes do not conform");
}

inline void cmac(std::complex<double>& acc, std::complex<double> a, std::complex<double> b) {
  acc = {acc.real() + (a.real() * b.real() - a.imag() * b.imag()),
         acc.imag() + (a.real() * b.imag() + a.imag() * b.real())};
}
}  // namespace detail

/// Triple loop, j -> k -> i.
inline void zgemm_naive(ConstComplexView a, ConstComplexView b, ComplexView c,
                        bool accumulate = false) {
  detail::check_complex_dims(a, b, c);
  for (std::size_t j = 0; j < c.cols(); ++j) {
    if (!accumulate)
      for (std::size_t i = 0; i < c.rows(); ++i) c(i, j) = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto bkj = b(k, j);
      for (std::size_t i = 0; i < c.rows(); ++i) detail::cmac(c(i, j), a(i, k), bkj);
    }
  }
}

inline ComplexMatrix zgemm_naive(ConstComplexView a, ConstComplexView b) {
  ComplexMatrix c(a.rows(), b.cols());
  zgemm_naive(a, b, c.view());
  return c;
}

/// Same arithmetic as zgemm_naive, tiled over (j, k, i) for cache reuse.
inline void zgemm_blocked(ConstComplexView a, ConstComplexView b, ComplexView c,
                          bool accumulate = false) {
  detail::check_complex_dims(a, b, c);
  constexpr std::size_t jb = 64, kb = 256, ib = 128;
  const std::size_t m = c.rows(), n = c.cols(), kk = a.cols();
  if (!accumulate)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) c(i, j) = 0.0;
  for (std::size_t j0 = 0; j0 < n; j0 += jb) {
    const std::size_t j1 = std::min(n, j0 + jb);
    for (std::size_t k0 = 0; k0 < kk; k0 += kb) {
      const std::size_t k1 = std::min(kk, k0 + kb);
      for (std::size_t i0 = 0; i0 < m; i0 += ib) {
        const std::size_t i1 = std::min(m, i0 + ib);
        for (std::size_t j = j0; j < j1; ++j) {
          std::complex<double>* cj = c.col(j);
          for (std::size_t k = k0; k < k1; ++k) {
            const auto bkj = b(k, j);
            const std::complex<double>* ak = a.col(k);
            for (std::size_t i = i0; i < i1; ++i) detail::cmac(cj[i], ak[i], bkj);
          }
        }
      }
    }
  }
}

#if defined(HGEMM_WITH_CBLAS)
inline constexpr bool has_vendor_zgemm = true;

/// Vendor complex GEMM through CBLAS.
inline void zgemm_vendor(ConstComplexView a, ConstComplexView b, ComplexView c) {
  detail::check_complex_dims(a, b, c);
  const std::complex<double> one = 1.0, zero = 0.0;
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(c.rows()),
              static_cast<int>(c.cols()), static_cast<int>(a.cols()), &one, a.data(),
              static_cast<int>(a.ld()), b.data(), static_cast<int>(b.ld()), &zero, c.data(),
              static_cast<int>(c.ld()));
}
#else
inline constexpr bool has_vendor_zgemm = false;
#endif

/// chi(alpha I) * Z for a 2M x N complex Z: applies the 2x2 representation
/// of `alpha` to every (top, bottom) row pair.
inline ComplexMatrix embedded_scale_left(const Quaternion& alpha, ConstComplexView z) {
  if (z.rows() % 2 != 0) throw dimension_error("embedded_scale_left: odd row count");
  const Complex2x2 s = to_complex2x2(alpha);
  const std::size_t m = z.rows() / 2;
  ComplexMatrix out(z.rows(), z.cols());
  for (std::size_t j = 0; j < z.cols(); ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto top = z(i, j), bot = z(i + m, j);
      out(i, j) = detail::cmul(s(0, 0), top) + detail::cmul(s(0, 1), bot);
      out(i + m, j) = detail::cmul(s(1, 0), top) + detail::cmul(s(1, 1), bot);
    }
  }
  return out;
}

}  // namespace hgemm
