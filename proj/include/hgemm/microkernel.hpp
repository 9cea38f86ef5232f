#pragma once

// 2x2 HGEMM microkernel: C_r <- C_r + sum_k a_k b_k^T over kc packed steps.
//
// C_r is loaded as four quaternions (C11, C12, C21, C22), transposed to
// component lanes, updated by one batch Hamilton product per step, and
// transposed back. Lane order of the rank-1 update is
//   A lanes [a1 a1 a2 a2] x B lanes [b1 b2 b1 b2] -> [C11 C12 C21 C22].
//
// The kernel body is a template over a lane backend; the vector and portable
// kernels are two instantiations of the same operation sequence.

#include <cassert>
#include <span>

#include "hgemm/lanes.hpp"
#include "hgemm/matrix.hpp"

namespace hgemm {

namespace detail {

/// One packed A step [a1w a1x a2w a2x | a1y a1z a2y a2z] to component lanes
/// A^c = [a1c a1c a2c a2c].
template <class Ops>
inline void stage2_a(Ops& ops, const double* a, typename Ops::vec (&av)[4]) {
  const auto t1 = ops.load(a);
  const auto t2 = ops.load(a + 4);
  av[0] = ops.dup_even(t1);
  av[1] = ops.dup_odd(t1);
  av[2] = ops.dup_even(t2);
  av[3] = ops.dup_odd(t2);
}

/// One packed B step [b1w b2w b1y b2y | b1x b2x b1z b2z] to component lanes
/// B^c = [b1c b2c b1c b2c].
template <class Ops>
inline void stage2_b(Ops& ops, const double* b, typename Ops::vec (&bv)[4]) {
  const auto s1 = ops.load(b);
  const auto s2 = ops.load(b + 4);
  bv[0] = ops.dup_low_half(s1);
  bv[1] = ops.dup_low_half(s2);
  bv[2] = ops.dup_high_half(s1);
  bv[3] = ops.dup_high_half(s2);
}

template <class Ops>
inline void kernel_2x2(Ops& ops, const double* a, const double* b, std::size_t kc,
                       Quaternion* c, std::size_t ldc) {
  using V = typename Ops::vec;
  auto addr = [&](std::size_t offset) { return reinterpret_cast<double*>(c + offset); };

  V r[4] = {ops.loadu(addr(0)), ops.loadu(addr(ldc)), ops.loadu(addr(1)),
            ops.loadu(addr(ldc + 1))};
  ops.transpose4(r[0], r[1], r[2], r[3]);

  for (std::size_t k = 0; k < kc; ++k, a += 8, b += 8) {
    V av[4], bv[4];
    stage2_a(ops, a, av);
    stage2_b(ops, b, bv);
    lanes::hmul_accumulate(ops, r, av, bv);
  }

  ops.transpose4(r[0], r[1], r[2], r[3]);
  ops.storeu(addr(0), r[0]);
  ops.storeu(addr(ldc), r[1]);
  ops.storeu(addr(1), r[2]);
  ops.storeu(addr(ldc + 1), r[3]);
}

inline void check_kernel_args(std::span<const double> a, std::span<const double> b,
                              std::size_t kc, QuatView c) {
  if (c.rows() != 2 || c.cols() != 2) throw dimension_error("microkernel: C_r must be 2x2");
  if (a.size() < 8 * kc || b.size() < 8 * kc)
    throw dimension_error("microkernel: panel shorter than kc steps");
}

}  // namespace detail

/// Portable 2x2 kernel on stage-1 packed panels.
inline void microkernel_portable(std::span<const double> a_panel, std::span<const double> b_panel,
                                 std::size_t kc, QuatView c_r) {
  detail::check_kernel_args(a_panel, b_panel, kc, c_r);
  lanes::scalar_ops ops;
  detail::kernel_2x2(ops, a_panel.data(), b_panel.data(), kc, c_r.data(), c_r.ld());
}

#if defined(__AVX__)
/// AVX 2x2 kernel. Panels must be 32-byte aligned.
inline void microkernel_vector(std::span<const double> a_panel, std::span<const double> b_panel,
                               std::size_t kc, QuatView c_r) {
  detail::check_kernel_args(a_panel, b_panel, kc, c_r);
  assert(reinterpret_cast<std::uintptr_t>(a_panel.data()) % 32 == 0);
  assert(reinterpret_cast<std::uintptr_t>(b_panel.data()) % 32 == 0);
  lanes::avx_ops ops;
  detail::kernel_2x2(ops, a_panel.data(), b_panel.data(), kc, c_r.data(), c_r.ld());
}
#endif

/// Vector kernel when the build targets AVX, portable kernel otherwise.
inline void microkernel(std::span<const double> a_panel, std::span<const double> b_panel,
                        std::size_t kc, QuatView c_r) {
#if defined(__AVX__)
  microkernel_vector(a_panel, b_panel, kc, c_r);
#else
  microkernel_portable(a_panel, b_panel, kc, c_r);
#endif
}

/// mr x nr kernel on plain-layout panels, for register shapes other than 2x2.
/// Each element receives c + hmul(a, b) in ascending k.
inline void microkernel_generic(std::span<const double> a_panel, std::span<const double> b_panel,
                                std::size_t kc, QuatView c_r) {
  const std::size_t mr = c_r.rows(), nr = c_r.cols();
  if (a_panel.size() < 4 * mr * kc || b_panel.size() < 4 * nr * kc)
    throw dimension_error("microkernel: panel shorter than kc steps");
  const double* a = a_panel.data();
  const double* b = b_panel.data();
  for (std::size_t k = 0; k < kc; ++k, a += 4 * mr, b += 4 * nr) {
    for (std::size_t j = 0; j < nr; ++j) {
      const Quaternion bj{b[4 * j], b[4 * j + 1], b[4 * j + 2], b[4 * j + 3]};
      for (std::size_t i = 0; i < mr; ++i) {
        const Quaternion ai{a[4 * i], a[4 * i + 1], a[4 * i + 2], a[4 * i + 3]};
        c_r(i, j) = c_r(i, j) + hmul(ai, bj);
      }
    }
  }
}

}  // namespace hgemm
